// Copyright 2026 The soficlab Authors
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

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/graph.hpp"

namespace soficlab {

// A generator symbol or its formal inverse. Letters are ordered
// s0 < s0^-1 < s1 < s1^-1 < ...; shortlex normal forms use this order.
struct Letter {
  std::uint32_t symbol = 0;
  bool inverse = false;

  Letter inverted() const { return {symbol, !inverse}; }
  std::uint32_t rank() const { return 2 * symbol + (inverse ? 1 : 0); }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter& a, const Letter& b) { return a.rank() <=> b.rank(); }
};

using Word = std::vector<Letter>;

// Ordered, distinct generator names. Inverses are implicit, so the set is
// always symmetric.
class GeneratingSet {
 public:
  GeneratingSet() = default;
  explicit GeneratingSet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw invalid_input("generating set must be nonempty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw invalid_input("empty generator name");
      for (char c : symbols_[i]) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
          throw invalid_input("generator names must be alphanumeric: '" + symbols_[i] + "'");
        }
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (symbols_[i] == symbols_[j]) throw invalid_input("duplicate generator '" + symbols_[i] + "'");
      }
    }
  }

  // a, b, c, ... then s26, s27, ...
  static GeneratingSet default_names(std::size_t count) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) {
      names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
    }
    return GeneratingSet(std::move(names));
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& name(std::uint32_t s) const { return symbols_.at(s); }
  const std::vector<std::string>& names() const noexcept { return symbols_; }

  std::uint32_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] == name) return static_cast<std::uint32_t>(i);
    }
    throw invalid_input("unknown generator symbol '" + std::string(name) + "'");
  }

  void check(const Word& w) const {
    for (const auto& l : w) {
      if (l.symbol >= symbols_.size()) {
        throw invalid_input("word letter " + std::to_string(l.symbol) + " outside generating set");
      }
    }
  }

  friend bool operator==(const GeneratingSet&, const GeneratingSet&) = default;

 private:
  std::vector<std::string> symbols_;
};

// Parses whitespace-separated tokens "name", "name^k" (k may be negative).
// The empty string is the empty word.
inline Word parse_word(const GeneratingSet& gens, std::string_view text) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '^') ++j;
    const std::uint32_t sym = gens.index_of(text.substr(i, j - i));
    long long power = 1;
    if (j < text.size() && text[j] == '^') {
      std::size_t k = j + 1;
      while (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      const auto exp = text.substr(j + 1, k - j - 1);
      auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), power);
      if (ec != std::errc() || ptr != exp.data() + exp.size()) {
        throw invalid_input("bad exponent in word: '" + std::string(text) + "'");
      }
      j = k;
    }
    const Letter l{sym, power < 0};
    for (long long p = 0; p < (power < 0 ? -power : power); ++p) w.push_back(l);
    i = j;
  }
  return w;
}

inline std::string format_word(const GeneratingSet& gens, const Word& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += gens.name(l.symbol);
    if (l.inverse) out += "^-1";
  }
  return out;
}

inline Word inverse_word(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->inverted());
  return r;
}

inline Word free_reduce(const Word& w) {
  Word r;
  for (const auto& l : w) {
    if (!r.empty() && r.back() == l.inverted()) {
      r.pop_back();
    } else {
      r.push_back(l);
    }
  }
  return r;
}

// Canonical element encoding; equal elements have equal data.
struct Element {
  std::vector<std::int64_t> data;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : e.data) {
      h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class GroupModel;

namespace kinds {
struct FreeAbelian {
  int rank;
};
struct FreeGroup {
  int rank;
};
// (Z/modulus)^rank
struct CyclicPower {
  std::int64_t modulus;
  int rank;
};
// Sym(degree) on the transposition (0 1) and the cycle (0 1 ... degree-1).
struct Symmetric {
  int degree;
};
struct Product {
  std::vector<GroupModel> factors;
};
}  // namespace kinds

inline constexpr std::size_t kDefaultBallCap = 1'000'000;

// A finitely generated group with solvable word problem. Elements are
// stored in canonical form: integer vectors (free abelian), freely reduced
// words (free), residue vectors (cyclic powers), image arrays (symmetric),
// length-prefixed concatenations (products).
class GroupModel {
 public:
  using Kind = std::variant<kinds::FreeAbelian, kinds::FreeGroup, kinds::CyclicPower,
                            kinds::Symmetric, kinds::Product>;

  static GroupModel free_abelian(int rank, std::vector<std::string> names = {}) {
    if (rank < 1) throw invalid_input("free abelian rank must be >= 1");
    return GroupModel(kinds::FreeAbelian{rank}, make_gens(rank, std::move(names)));
  }
  static GroupModel free_group(int rank, std::vector<std::string> names = {}) {
    if (rank < 1) throw invalid_input("free group rank must be >= 1");
    return GroupModel(kinds::FreeGroup{rank}, make_gens(rank, std::move(names)));
  }
  static GroupModel cyclic_power(std::int64_t modulus, int rank, std::vector<std::string> names = {}) {
    if (modulus < 2) throw invalid_input("cyclic modulus must be >= 2");
    if (rank < 1) throw invalid_input("cyclic power rank must be >= 1");
    return GroupModel(kinds::CyclicPower{modulus, rank}, make_gens(rank, std::move(names)));
  }
  static GroupModel symmetric(int degree, std::vector<std::string> names = {}) {
    if (degree < 2 || degree > 8) throw invalid_input("symmetric group degree must be in [2, 8]");
    GroupModel g(kinds::Symmetric{degree}, make_gens(2, std::move(names)));
    g.build_symmetric_table();
    return g;
  }
  static GroupModel direct_product(std::vector<GroupModel> factors, std::vector<std::string> names = {}) {
    if (factors.empty()) throw invalid_input("direct product needs at least one factor");
    std::size_t total = 0;
    for (const auto& f : factors) total += f.rank();
    return GroupModel(kinds::Product{std::move(factors)}, make_gens(static_cast<int>(total), std::move(names)));
  }

  const Kind& kind() const noexcept { return kind_; }
  const GeneratingSet& generators() const noexcept { return gens_; }
  std::size_t rank() const noexcept { return gens_.size(); }

  std::string kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian>) return "free_abelian";
          if constexpr (std::is_same_v<K, kinds::FreeGroup>) return "free_group";
          if constexpr (std::is_same_v<K, kinds::CyclicPower>) return "cyclic_power";
          if constexpr (std::is_same_v<K, kinds::Symmetric>) return "symmetric";
          if constexpr (std::is_same_v<K, kinds::Product>) return "direct_product";
        },
        kind_);
  }

  Element identity() const {
    return std::visit(
        [](const auto& k) -> Element {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian> || std::is_same_v<K, kinds::CyclicPower>) {
            return {std::vector<std::int64_t>(static_cast<std::size_t>(k.rank), 0)};
          } else if constexpr (std::is_same_v<K, kinds::FreeGroup>) {
            return {};
          } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
            std::vector<std::int64_t> p(static_cast<std::size_t>(k.degree));
            std::iota(p.begin(), p.end(), 0);
            return {std::move(p)};
          } else {
            std::vector<Element> parts;
            for (const auto& f : k.factors) parts.push_back(f.identity());
            return pack(parts);
          }
        },
        kind_);
  }

  bool is_identity(const Element& e) const { return e == identity(); }

  Element letter(Letter l) const {
    if (l.symbol >= rank()) throw invalid_input("letter outside generating set");
    Element g = std::visit(
        [&](const auto& k) -> Element {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian> || std::is_same_v<K, kinds::CyclicPower>) {
            Element e = identity();
            e.data[l.symbol] = 1;
            return e;
          } else if constexpr (std::is_same_v<K, kinds::FreeGroup>) {
            return {{static_cast<std::int64_t>(l.symbol) + 1}};
          } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
            Element e = identity();
            const auto m = static_cast<std::size_t>(k.degree);
            if (l.symbol == 0) {
              std::swap(e.data[0], e.data[1]);
            } else {
              for (std::size_t i = 0; i < m; ++i) e.data[i] = static_cast<std::int64_t>((i + 1) % m);
            }
            return e;
          } else {
            std::vector<Element> parts;
            std::uint32_t offset = 0;
            for (const auto& f : k.factors) {
              const auto r = static_cast<std::uint32_t>(f.rank());
              parts.push_back(l.symbol >= offset && l.symbol < offset + r
                                  ? f.letter({l.symbol - offset, false})
                                  : f.identity());
              offset += r;
            }
            return pack(parts);
          }
        },
        kind_);
    return l.inverse ? inverse(g) : g;
  }

  Element multiply(const Element& a, const Element& b) const {
    return std::visit(
        [&](const auto& k) -> Element {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian>) {
            Element r = a;
            for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
            return r;
          } else if constexpr (std::is_same_v<K, kinds::CyclicPower>) {
            Element r = a;
            for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = (r.data[i] + b.data[i]) % k.modulus;
            return r;
          } else if constexpr (std::is_same_v<K, kinds::FreeGroup>) {
            Element r = a;
            for (auto x : b.data) {
              if (!r.data.empty() && r.data.back() == -x) {
                r.data.pop_back();
              } else {
                r.data.push_back(x);
              }
            }
            return r;
          } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
            // (ab)(i) = a(b(i))
            Element r = b;
            for (auto& x : r.data) x = a.data[static_cast<std::size_t>(x)];
            return r;
          } else {
            const auto pa = unpack(a, k.factors.size());
            const auto pb = unpack(b, k.factors.size());
            std::vector<Element> parts;
            for (std::size_t i = 0; i < k.factors.size(); ++i) parts.push_back(k.factors[i].multiply(pa[i], pb[i]));
            return pack(parts);
          }
        },
        kind_);
  }

  Element inverse(const Element& a) const {
    return std::visit(
        [&](const auto& k) -> Element {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian>) {
            Element r = a;
            for (auto& x : r.data) x = -x;
            return r;
          } else if constexpr (std::is_same_v<K, kinds::CyclicPower>) {
            Element r = a;
            for (auto& x : r.data) x = (k.modulus - x) % k.modulus;
            return r;
          } else if constexpr (std::is_same_v<K, kinds::FreeGroup>) {
            Element r;
            for (auto it = a.data.rbegin(); it != a.data.rend(); ++it) r.data.push_back(-*it);
            return r;
          } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
            Element r = a;
            for (std::size_t i = 0; i < a.data.size(); ++i) r.data[static_cast<std::size_t>(a.data[i])] = static_cast<std::int64_t>(i);
            return r;
          } else {
            const auto pa = unpack(a, k.factors.size());
            std::vector<Element> parts;
            for (std::size_t i = 0; i < k.factors.size(); ++i) parts.push_back(k.factors[i].inverse(pa[i]));
            return pack(parts);
          }
        },
        kind_);
  }

  // Product of letter images, left to right; the empty word is the identity.
  Element evaluate(const Word& w) const {
    gens_.check(w);
    Element r = identity();
    for (const auto& l : w) r = multiply(r, letter(l));
    return r;
  }

  // Shortlex-least geodesic word representing e.
  Word normal_form(const Element& e) const {
    return std::visit(
        [&](const auto& k) -> Word {
          using K = std::decay_t<decltype(k)>;
          Word w;
          if constexpr (std::is_same_v<K, kinds::FreeAbelian>) {
            for (std::size_t i = 0; i < e.data.size(); ++i) {
              const Letter l{static_cast<std::uint32_t>(i), e.data[i] < 0};
              for (std::int64_t c = 0; c < (e.data[i] < 0 ? -e.data[i] : e.data[i]); ++c) w.push_back(l);
            }
          } else if constexpr (std::is_same_v<K, kinds::CyclicPower>) {
            for (std::size_t i = 0; i < e.data.size(); ++i) {
              const auto r = e.data[i];
              const bool use_inverse = k.modulus - r < r;
              const auto count = use_inverse ? k.modulus - r : r;
              for (std::int64_t c = 0; c < count; ++c) w.push_back({static_cast<std::uint32_t>(i), use_inverse});
            }
          } else if constexpr (std::is_same_v<K, kinds::FreeGroup>) {
            for (auto x : e.data) w.push_back({static_cast<std::uint32_t>((x < 0 ? -x : x) - 1), x < 0});
          } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
            auto it = symmetric_table_->find(e);
            if (it == symmetric_table_->end()) throw invalid_input("element outside symmetric group model");
            w = it->second;
          } else {
            const auto parts = unpack(e, k.factors.size());
            std::uint32_t offset = 0;
            for (std::size_t i = 0; i < k.factors.size(); ++i) {
              for (auto l : k.factors[i].normal_form(parts[i])) w.push_back({l.symbol + offset, l.inverse});
              offset += static_cast<std::uint32_t>(k.factors[i].rank());
            }
          }
          return w;
        },
        kind_);
  }

  std::size_t word_length(const Element& e) const { return normal_form(e).size(); }

 private:
  GroupModel(Kind kind, GeneratingSet gens) : kind_(std::move(kind)), gens_(std::move(gens)) {}

  static GeneratingSet make_gens(int count, std::vector<std::string> names) {
    if (names.empty()) return GeneratingSet::default_names(static_cast<std::size_t>(count));
    if (names.size() != static_cast<std::size_t>(count)) {
      throw invalid_input("expected " + std::to_string(count) + " generator names, got " +
                          std::to_string(names.size()));
    }
    return GeneratingSet(std::move(names));
  }

  static Element pack(const std::vector<Element>& parts) {
    Element e;
    for (const auto& p : parts) {
      e.data.push_back(static_cast<std::int64_t>(p.data.size()));
      e.data.insert(e.data.end(), p.data.begin(), p.data.end());
    }
    return e;
  }

  static std::vector<Element> unpack(const Element& e, std::size_t count) {
    std::vector<Element> parts(count);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (pos >= e.data.size()) throw invalid_input("malformed product element");
      const auto len = static_cast<std::size_t>(e.data[pos++]);
      if (pos + len > e.data.size()) throw invalid_input("malformed product element");
      parts[i].data.assign(e.data.begin() + static_cast<std::ptrdiff_t>(pos),
                           e.data.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
    return parts;
  }

  // Breadth-first search appending letters in rank order: the first word to
  // reach an element is its shortlex-least geodesic.
  void build_symmetric_table() {
    auto table = std::make_shared<std::unordered_map<Element, Word, ElementHash>>();
    std::vector<Element> queue{identity()};
    (*table)[identity()] = {};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Element g = queue[head];
      const Word base = table->at(g);
      for (std::uint32_t r = 0; r < 2 * rank(); ++r) {
        const Letter l{r / 2, (r % 2) == 1};
        Element h = multiply(g, letter(l));
        if (table->contains(h)) continue;
        Word w = base;
        w.push_back(l);
        table->emplace(h, std::move(w));
        queue.push_back(std::move(h));
      }
    }
    symmetric_table_ = std::move(table);
  }

  Kind kind_;
  GeneratingSet gens_;
  std::shared_ptr<const std::unordered_map<Element, Word, ElementHash>> symmetric_table_;
};

inline Element evaluate_word(const GroupModel& model, const Word& w) { return model.evaluate(w); }

inline bool is_identity(const GroupModel& model, const Word& w) { return model.is_identity(model.evaluate(w)); }

// Elements of the closed word-metric ball B_r(e) in breadth-first order
// (identity first, neighbours s.g explored in letter order).
inline std::vector<Element> ball_elements(const GroupModel& model, int radius,
                                          std::size_t cap = kDefaultBallCap) {
  if (radius < 0) throw invalid_input("radius must be >= 0");
  std::unordered_map<Element, int, ElementHash> dist;
  std::vector<Element> order{model.identity()};
  dist.emplace(order.front(), 0);
  std::vector<Element> letters;
  for (std::uint32_t r = 0; r < 2 * model.rank(); ++r) letters.push_back(model.letter({r / 2, (r % 2) == 1}));
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int d = dist.at(order[head]);
    if (d >= radius) continue;
    for (const auto& s : letters) {
      Element h = model.multiply(s, order[head]);
      if (dist.contains(h)) continue;
      if (order.size() >= cap) throw resource_error("Cayley ball exceeds vertex cap", cap);
      dist.emplace(h, d + 1);
      order.push_back(std::move(h));
    }
  }
  return order;
}

// Rooted, S-labelled ball of radius r in Cay(G, S) at the identity; edge
// g -> s.g labelled s whenever both endpoints lie in the ball.
inline RootedBall cayley_ball(const GroupModel& model, int radius, std::size_t cap = kDefaultBallCap) {
  const auto elems = ball_elements(model, radius, cap);
  std::unordered_map<Element, Vertex, ElementHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<Vertex>(i));
  std::vector<LabeledEdge> edges;
  for (std::uint32_t s = 0; s < model.rank(); ++s) {
    const Element gen = model.letter({s, false});
    for (std::size_t i = 0; i < elems.size(); ++i) {
      auto it = index.find(model.multiply(gen, elems[i]));
      if (it != index.end()) edges.push_back({static_cast<Vertex>(i), it->second, s});
    }
  }
  std::vector<EdgeLabel> labels;
  for (const auto& name : model.generators().names()) labels.push_back({name, false});
  return {LabeledGraph(elems.size(), std::move(labels), std::move(edges)), 0, radius};
}

}  // namespace soficlab
