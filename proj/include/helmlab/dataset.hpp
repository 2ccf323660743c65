// Copyright 2026 The Helmlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "helmlab/errors.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

// Sub-experiments of the combined visual-difference corpus.
enum class Subset { kBfdD65, kBfdM, kBfdC, kWitt, kLeeds, kRitDupont, kOther };

inline constexpr std::array<Subset, 7> kAllSubsets = {Subset::kBfdD65, Subset::kBfdM,
                                                      Subset::kBfdC,   Subset::kWitt,
                                                      Subset::kLeeds,  Subset::kRitDupont,
                                                      Subset::kOther};

inline constexpr std::string_view subset_name(Subset s) {
  switch (s) {
    case Subset::kBfdD65: return "BFD-P(D65)";
    case Subset::kBfdM: return "BFD-P(M)";
    case Subset::kBfdC: return "BFD-P(C)";
    case Subset::kWitt: return "Witt";
    case Subset::kLeeds: return "Leeds";
    case Subset::kRitDupont: return "RIT-DuPont";
    case Subset::kOther: return "other";
  }
  return "other";
}

// Case- and punctuation-insensitive: "bfd_p_d65", "BFD-P(D65)" and "BFDPD65"
// all name the same subset. Unknown tags map to kOther.
inline Subset parse_subset(std::string_view tag) {
  std::string key;
  for (char ch : tag) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
  }
  if (key == "BFDPD65" || key == "BFDD65") return Subset::kBfdD65;
  if (key == "BFDPM" || key == "BFDM") return Subset::kBfdM;
  if (key == "BFDPC" || key == "BFDC") return Subset::kBfdC;
  if (key == "WITT") return Subset::kWitt;
  if (key == "LEEDS") return Subset::kLeeds;
  if (key == "RITDUPONT" || key == "RIT") return Subset::kRitDupont;
  return Subset::kOther;
}

struct ColorPair {
  XyzColor first;
  XyzColor second;
  double dv = 0.0;
  Subset subset = Subset::kOther;
};

struct PairDataset {
  std::vector<ColorPair> pairs;
  // Optional precomputed differences from external metrics, keyed by the
  // metric name (the `de_<name>` column suffix), one value per pair.
  std::map<std::string, std::vector<double>> external_de;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  std::vector<double> visual_differences() const {
    std::vector<double> dv;
    dv.reserve(pairs.size());
    for (const auto& p : pairs) dv.push_back(p.dv);
    return dv;
  }

  // Pairs selected by index, carrying external columns along.
  PairDataset select(const std::vector<std::size_t>& idx) const {
    PairDataset out;
    out.pairs.reserve(idx.size());
    for (std::size_t i : idx) out.pairs.push_back(pairs[i]);
    for (const auto& [name, col] : external_de) {
      auto& dst = out.external_de[name];
      for (std::size_t i : idx) dst.push_back(col[i]);
    }
    return out;
  }

  PairDataset filter(Subset s) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].subset == s) idx.push_back(i);
    return select(idx);
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool try_parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

inline double parse_field(std::string_view s, std::string_view column, std::size_t line) {
  double v = 0.0;
  if (!try_parse_double(s, v)) {
    throw ParseError("column '" + std::string(column) + "': not a number: '" + std::string(s) + "'",
                     line);
  }
  return v;
}

// Non-empty, comment-stripped lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) out.emplace_back(lineno, line);
  }
  return out;
}

}  // namespace detail

// Parses the pair CSV: header `x1,y1,z1,x2,y2,z2,dv,subset` (any column
// order) plus optional `de_<metric>` columns. XYZ must already be adapted
// to D65 with Y = 1 for white.
inline PairDataset load_dataset(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("dataset is empty");

  const auto header = detail::split_csv(lines.front().second);
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(header[i]), i);
  static constexpr std::array<std::string_view, 8> kRequired = {"x1", "y1", "z1", "x2",
                                                                "y2", "z2", "dv", "subset"};
  std::array<std::size_t, 8> idx{};
  for (std::size_t k = 0; k < kRequired.size(); ++k) {
    auto it = col.find(kRequired[k]);
    if (it == col.end()) {
      throw ParseError("header is missing column '" + std::string(kRequired[k]) + "'",
                       lines.front().first);
    }
    idx[k] = it->second;
  }
  std::vector<std::pair<std::string, std::size_t>> extra;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].starts_with("de_") && header[i].size() > 3) {
      extra.emplace_back(std::string(header[i].substr(3)), i);
    }
  }

  PairDataset ds;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [lineno, line] = lines[li];
    const auto f = detail::split_csv(line);
    if (f.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(f.size()),
                       lineno);
    }
    auto num = [&](std::size_t k) { return detail::parse_field(f[idx[k]], kRequired[k], lineno); };
    ColorPair p;
    p.first = {num(0), num(1), num(2)};
    p.second = {num(3), num(4), num(5)};
    p.dv = num(6);
    p.subset = parse_subset(f[idx[7]]);
    if (!(p.dv > 0.0) || !std::isfinite(p.dv)) {
      throw ValidationError("line " + std::to_string(lineno) + ": dv must be positive");
    }
    for (double v : {p.first.X, p.first.Y, p.first.Z, p.second.X, p.second.Y, p.second.Z}) {
      if (!std::isfinite(v)) throw ValidationError("line " + std::to_string(lineno) + ": non-finite XYZ");
    }
    ds.pairs.push_back(p);
    for (const auto& [name, i] : extra) {
      ds.external_de[name].push_back(detail::parse_field(f[i], header[i], lineno));
    }
  }
  if (ds.empty()) throw ValidationError("dataset contains no pairs");
  return ds;
}

// Neighbor pairs from a `chain_id,index,x,y,z` file: entries of one chain
// whose indices differ by exactly one.
struct MunsellPairs {
  std::vector<std::pair<XyzColor, XyzColor>> pairs;
};

inline MunsellPairs load_munsell(std::string_view text) {
  const auto lines = detail::content_lines(text);
  std::map<std::string, std::map<long long, XyzColor>> chains;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto [lineno, line] = lines[li];
    const auto f = detail::split_csv(line);
    if (li == 0 && !f.empty() && f[0] == "chain_id") continue;
    if (f.size() != 5) throw ParseError("expected 5 fields (chain_id,index,x,y,z)", lineno);
    long long index = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), index);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size()) {
      throw ParseError("index is not an integer: '" + std::string(f[1]) + "'", lineno);
    }
    XyzColor c{detail::parse_field(f[2], "x", lineno), detail::parse_field(f[3], "y", lineno),
               detail::parse_field(f[4], "z", lineno)};
    if (!chains[std::string(f[0])].emplace(index, c).second) {
      throw ParseError("duplicate index within chain '" + std::string(f[0]) + "'", lineno);
    }
  }
  MunsellPairs out;
  for (const auto& [id, chain] : chains) {
    for (auto it = chain.begin(); it != chain.end(); ++it) {
      auto next = std::next(it);
      if (next != chain.end() && next->first == it->first + 1) {
        out.pairs.emplace_back(it->second, next->second);
      }
    }
  }
  return out;
}

}  // namespace helmlab
