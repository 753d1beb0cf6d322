#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schedlift/rational.hpp"

namespace schedlift {

struct InstanceError : std::runtime_error {
  enum class Kind { Header, Edge, Range, Cycle };

  InstanceError(Kind k, int line_number, const std::string& message)
      : std::runtime_error(message), kind(k), line(line_number) {}

  Kind kind;
  // 1-based input line for text parses, 0 when not applicable.
  int line;
};

// Transitive closure of the precedence DAG. before(u, v) is the strict
// order; pairs() lists every related pair sorted lexicographically.
class PrecRelation {
 public:
  PrecRelation() = default;
  PrecRelation(int n, const std::vector<std::pair<int, int>>& edges,
               const std::vector<int>& topo);

  int jobs() const { return n_; }

  bool before(int u, int v) const {
    const std::uint64_t word = succ_[static_cast<std::size_t>(u - 1) *
                                         static_cast<std::size_t>(words_) +
                                     static_cast<std::size_t>((v - 1) >> 6)];
    return (word >> ((v - 1) & 63)) & 1u;
  }

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> succ_;
  std::vector<std::pair<int, int>> pairs_;
};

// Unit jobs 1..n on m identical machines with precedence edges (u, v)
// meaning u must run in a strictly earlier slot than v. Immutable once
// built; the closure and a topological order are computed up front.
class Instance {
 public:
  // Validates id ranges, rejects self-loops and cycles; edges are stored
  // sorted and deduplicated.
  static Instance make(int n, int m, std::vector<std::pair<int, int>> prec);

  int jobs() const { return n_; }
  int machines() const { return m_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const PrecRelation& closure() const { return closure_; }
  const std::vector<int>& topo_order() const { return topo_; }

 private:
  Instance() = default;

  int n_ = 0;
  int m_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> topo_;
  PrecRelation closure_;
};

// Text format, one record per line:
//   c <comment>
//   p sched <n> <m>     (exactly once, before any edge)
//   e <u> <v>
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

// JSON mirror: {"n": ..., "m": ..., "prec": [[u, v], ...]}.
Instance parse_instance_json(const std::string& text);
std::string serialize_instance_json(const Instance& inst);

// Sniffs the format: leading '{' means JSON, anything else the text format.
Instance parse_instance_auto(const std::string& text);

// Each pair u < v becomes an edge independently with probability p.
Instance generate_gnp(int n, int m, const Rational& p, std::uint64_t seed);
// Single chain 1 -> 2 -> ... -> n.
Instance generate_chain(int n, int m);
// `layers` consecutive groups of near-equal size, complete bipartite edges
// between neighbouring groups.
Instance generate_layered(int n, int m, int layers);

// Longest chain using only jobs from `jobs`; among maximum-length chains
// returns the lexicographically smallest id sequence.
std::vector<int> longest_chain(const PrecRelation& rel,
                               const std::vector<int>& jobs);

}  // namespace schedlift
