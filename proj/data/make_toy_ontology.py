#!/usr/bin/env python3
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

"""Writes toy_ontology.json: 3 informable slots and a 30-venue database."""

import itertools
import json
import random
import sys

FOOD = ["chinese", "eritrean", "italian", "north american", "spanish"]
AREA = ["centre", "north", "south"]
PRICE = ["cheap", "expensive", "moderate"]
NAMES = [
    "the golden lantern", "la tasca", "pizza palace", "the copper kettle",
    "red dragon", "casa del sol", "the blue door", "harbour house",
    "the old mill", "green olive", "the lucky star", "little rome",
    "the grill shack", "saffron", "the hideaway", "bella vista",
    "the corner table", "jade garden", "el toro", "the wooden spoon",
    "maple diner", "the river room", "asmara kitchen", "the pantry",
    "silver birch", "the hungry fox", "lotus court", "trattoria nova",
    "the brass monkey", "meadow cafe",
]
STREETS = ["mill road", "king street", "regent street", "hills road",
           "bridge street", "market square", "station road", "castle street"]


def main():
  rng = random.Random(20260101)
  combos = [c for c in itertools.product(FOOD, AREA, PRICE)
            if c[0] != "eritrean" or c[1] == "centre"]
  chosen = rng.sample(combos, 30)
  chosen.sort(key=lambda c: (FOOD.index(c[0]), AREA.index(c[1]), PRICE.index(c[2])))
  venues = []
  for k, (food, area, price) in enumerate(chosen):
    venues.append({
        "name": NAMES[k],
        "food": food,
        "area": area,
        "pricerange": price,
        "phone": "01223 %06d" % rng.randrange(10**6),
        "addr": "%d %s" % (rng.randrange(1, 200), rng.choice(STREETS)),
        "postcode": "cb%d %d%s" % (rng.randrange(1, 6), rng.randrange(1, 10),
                                   "".join(rng.choice("abdefghjlnpqrstuwxyz")
                                           for _ in range(2))),
    })
  doc = {
      "informable": {"food": FOOD, "area": AREA, "pricerange": PRICE},
      "requestable": ["name", "phone", "addr", "postcode"],
      "venues": venues,
  }
  json.dump(doc, sys.stdout, indent=2)
  sys.stdout.write("\n")


if __name__ == "__main__":
  main()
