// Copyright 2026 The Usersim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "usersim/semantic_decoder.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "usersim/errors.h"

namespace usersim {
namespace {

std::string EscapeRegex(std::string_view s) {
  static constexpr std::string_view kSpecial = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string ExpandSlots(const std::string& pattern, const Ontology& ontology) {
  std::string out;
  size_t pos = 0;
  while (pos < pattern.size()) {
    const size_t open = pattern.find('{', pos);
    if (open == std::string::npos) {
      out += pattern.substr(pos);
      break;
    }
    const size_t close = pattern.find('}', open);
    const std::string name =
        close == std::string::npos ? "" : pattern.substr(open + 1, close - open - 1);
    if (close == std::string::npos || !ontology.IsInformable(name)) {
      // Not a slot reference: keep the brace as a regex quantifier.
      out += pattern.substr(pos, open - pos + 1);
      pos = open + 1;
      continue;
    }
    std::vector<std::string> values = ontology.Slot(name).values;
    std::stable_sort(values.begin(), values.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    out += pattern.substr(pos, open - pos);
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += '|';
      out += EscapeRegex(values[i]);
    }
    pos = close + 1;
  }
  return out;
}

std::string Substitute(const std::string& tmpl, const std::smatch& m) {
  std::string out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && std::isdigit(static_cast<unsigned char>(tmpl[i + 1]))) {
      const size_t group = static_cast<size_t>(tmpl[i + 1] - '0');
      if (group < m.size()) out += m[group].str();
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

struct Candidate {
  size_t begin;
  size_t end;
  size_t rule;
  UserAct act;
};

}  // namespace

SemanticDecoder::SemanticDecoder(const Ontology& ontology, std::string_view rules_text) {
  std::istringstream in{std::string(rules_text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse, "rule line " + std::to_string(line_no) + " has no TAB");
    }
    Rule rule;
    rule.line = line_no;
    rule.act_template = line.substr(tab + 1);
    // Validate the template shape up front with a dummy capture.
    std::string probe = rule.act_template;
    for (size_t p = probe.find('$'); p != std::string::npos; p = probe.find('$')) {
      probe.replace(p, 2, "x");
    }
    (void)ParseUserAct(probe);
    try {
      rule.pattern = std::regex(ExpandSlots(line.substr(0, tab), ontology),
                                std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kParse,
                  "rule line " + std::to_string(line_no) + ": " + e.what());
    }
    rules_.push_back(std::move(rule));
  }
}

SemanticDecoder SemanticDecoder::Load(const Ontology& ontology,
                                      const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return SemanticDecoder(ontology, buffer.str());
}

std::string SemanticDecoder::Normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = true;
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (c == '\'') continue;
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
      space = false;
    } else if (!space) {
      out += ' ';
      space = true;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<UserAct> SemanticDecoder::Parse(std::string_view text) const {
  const std::string normalized = Normalize(text);
  std::vector<Candidate> candidates;
  for (size_t r = 0; r < rules_.size(); ++r) {
    auto begin = std::sregex_iterator(normalized.begin(), normalized.end(), rules_[r].pattern);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      const std::smatch& m = *it;
      if (m.length(0) == 0) continue;
      const size_t start = static_cast<size_t>(m.position(0));
      candidates.push_back({start, start + static_cast<size_t>(m.length(0)), r,
                            ParseUserAct(Substitute(rules_[r].act_template, m))});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    const size_t la = a.end - a.begin, lb = b.end - b.begin;
    if (la != lb) return la > lb;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.rule < b.rule;
  });
  std::vector<const Candidate*> kept;
  for (const Candidate& c : candidates) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Candidate* k) {
      return c.begin < k->end && k->begin < c.end;
    });
    if (!overlaps) kept.push_back(&c);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const Candidate* a, const Candidate* b) { return a->begin < b->begin; });
  std::vector<UserAct> acts;
  for (const Candidate* c : kept) {
    if (std::find(acts.begin(), acts.end(), c->act) == acts.end()) acts.push_back(c->act);
  }
  if (acts.empty()) acts.push_back(UserAct::Make(UserActType::kNull));
  return acts;
}

std::vector<UserAct> CachingDecoder::Parse(std::string_view text) const {
  std::string key(text);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  std::vector<UserAct> acts = decoder_.Parse(text);
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(std::move(key), acts);
  return acts;
}

}  // namespace usersim
