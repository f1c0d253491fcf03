# Copyright 2026 The Usersim Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent scalar oracles for golden test values.

Writes tests/fixtures/goldens.json. Uses only the Python standard library.
"""

import json
import math
import os

MASK64 = (1 << 64) - 1


class MT19937_64:
  """Reference 64-bit Mersenne Twister."""

  def __init__(self, seed):
    self.mt = [0] * 312
    self.mt[0] = seed & MASK64
    for i in range(1, 312):
      prev = self.mt[i - 1]
      self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK64
    self.index = 312

  def _twist(self):
    upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
    for i in range(312):
      x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
      xa = x >> 1
      if x & 1:
        xa ^= 0xB5026F5AA96619E9
      self.mt[i] = self.mt[(i + 156) % 312] ^ xa
    self.index = 0

  def next(self):
    if self.index >= 312:
      self._twist()
    y = self.mt[self.index]
    self.index += 1
    y ^= (y >> 29) & 0x5555555555555555
    y ^= (y << 17) & 0x71D67FFFEDA60000
    y ^= (y << 37) & 0xFFF7EEE000000000
    y ^= y >> 43
    return y & MASK64


def splitmix(x):
  x = (x + 0x9E3779B97F4A7C15) & MASK64
  x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
  x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
  return x ^ (x >> 31)


class Stream:

  def __init__(self, seed):
    self.eng = MT19937_64(splitmix(seed))

  def uniform(self):
    return (self.eng.next() >> 11) * 2.0**-53

  def index(self, n):
    limit = MASK64 - (MASK64 % n)
    while True:
      x = self.eng.next()
      if x < limit:
        return x % n


def sample_goal(seed, informable, requestable, probs, request_prob):
  rng = Stream(seed)
  while True:
    present = [rng.uniform() < probs[name] for name, _ in informable]
    if any(present):
      break
  constraints = {}
  for (name, values), p in zip(informable, present):
    if p:
      constraints[name] = values[rng.index(len(values))]
  requests = []
  while not requests:
    for r in requestable:
      if rng.uniform() < request_prob:
        requests.append(r)
  return {"constraints": constraints, "requests": requests}


def sigmoid(x):
  return 1.0 / (1.0 + math.exp(-x))


def matvec(m, v):
  return [sum(a * b for a, b in zip(row, v)) for row in m]


def lstm_step(p, x, h, c):
  """Rows of w_input / w_hidden: input, forget, output, cell gates."""
  hidden = len(h)
  pre = [a + b for a, b in zip(matvec(p["w_input"], x), matvec(p["w_hidden"], h))]
  gi = [sigmoid(pre[k] + p["b_input"][k]) for k in range(hidden)]
  gf = [sigmoid(pre[hidden + k]) for k in range(hidden)]
  go = [sigmoid(pre[2 * hidden + k] + p["b_output"][k]) for k in range(hidden)]
  gg = [math.tanh(pre[3 * hidden + k] + p["b_cell"][k]) for k in range(hidden)]
  c2 = [gf[k] * c[k] + gi[k] * gg[k] for k in range(hidden)]
  h2 = [go[k] * math.tanh(c2[k]) for k in range(hidden)]
  return h2, c2


def fill(index, rows, cols):
  """Deterministic tensor contents shared with the C++ tests."""
  return [[0.5 * math.sin(1.3 * index + 0.7 * r + 0.31 * c + 0.1) for c in range(cols)]
          for r in range(rows)]


def vec(index, n):
  return [row[0] for row in fill(index, n, 1)]


def lstm_golden():
  p = {
      "w_input": fill(0, 8, 2),
      "w_hidden": fill(1, 8, 2),
      "b_input": vec(2, 2),
      "b_output": vec(3, 2),
      "b_cell": vec(4, 2),
  }
  x = [0.3, -0.7]
  h = [0.1, -0.2]
  c = [0.5, 0.25]
  h2, c2 = lstm_step(p, x, h, c)
  return {"x": x, "h_prev": h, "c_prev": c, "h": h2, "c": c2}


def decoder_golden():
  feature_dim, hidden, bridge = 3, 2, 2
  tokens = ["<SOS>", "<EOS>", "<UNK>", "hello", "world"]
  vocab = len(tokens)
  enc = {
      "w_input": fill(0, 4 * hidden, feature_dim),
      "w_hidden": fill(1, 4 * hidden, hidden),
      "b_input": vec(2, hidden),
      "b_output": vec(3, hidden),
      "b_cell": vec(4, hidden),
  }
  bridge_w = fill(5, bridge, hidden)
  bridge_b = vec(6, bridge)
  dec = {
      "w_input": fill(7, 4 * hidden, vocab + bridge),
      "w_hidden": fill(8, 4 * hidden, hidden),
      "b_input": vec(9, hidden),
      "b_output": vec(10, hidden),
      "b_cell": vec(11, hidden),
  }
  out_w = fill(12, vocab, hidden)
  out_b = vec(13, vocab)

  history = [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]
  h, c = [0.0] * hidden, [0.0] * hidden
  for v in history:
    h, c = lstm_step(enc, v, h, c)
  p = [a + b for a, b in zip(matvec(bridge_w, h), bridge_b)]

  prefix = [0, 3]
  h, c = [0.0] * hidden, [0.0] * hidden
  for tok in prefix:
    x = [1.0 if k == tok else 0.0 for k in range(vocab)] + p
    h, c = lstm_step(dec, x, h, c)
  logits = [a + b for a, b in zip(matvec(out_w, h), out_b)]
  m = max(logits)
  z = sum(math.exp(l - m) for l in logits)
  probs = [math.exp(l - m) / z for l in logits]
  return {
      "feature_dim": feature_dim,
      "hidden": hidden,
      "bridge": bridge,
      "tokens": tokens,
      "history": history,
      "prefix": prefix,
      "p": p,
      "distribution": probs,
  }


def main():
  here = os.path.dirname(os.path.abspath(__file__))
  root = os.path.dirname(os.path.dirname(here))
  with open(os.path.join(root, "data", "toy_ontology.json")) as f:
    onto = json.load(f)
  informable = list(onto["informable"].items())
  probs = {"food": 0.66, "area": 0.62, "pricerange": 0.58}
  goldens = {
      "goal_seed42": sample_goal(42, informable, onto["requestable"], probs, 0.4),
      "lstm_2x2": lstm_golden(),
      "decoder_tiny": decoder_golden(),
  }
  out = os.path.join(root, "tests", "fixtures", "goldens.json")
  with open(out, "w") as f:
    json.dump(goldens, f, indent=2)
    f.write("\n")


if __name__ == "__main__":
  main()
