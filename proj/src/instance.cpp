#include "schedlift/instance.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "schedlift/prng.hpp"

namespace schedlift {

namespace {

std::vector<int> toposort_or_throw(int n,
                                   const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n) + 1);
  std::vector<int> indeg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges) {
    out[static_cast<std::size_t>(u)].push_back(v);
    ++indeg[static_cast<std::size_t>(v)];
  }
  // Min-id first so the order is deterministic.
  std::vector<int> ready;
  for (int j = 1; j <= n; ++j)
    if (indeg[static_cast<std::size_t>(j)] == 0) ready.push_back(j);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    const int j = ready.back();
    ready.pop_back();
    order.push_back(j);
    for (int v : out[static_cast<std::size_t>(j)]) {
      if (--indeg[static_cast<std::size_t>(v)] == 0) {
        ready.push_back(v);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw InstanceError(InstanceError::Kind::Cycle, 0,
                        "precedence relation contains a cycle");
  return order;
}

}  // namespace

PrecRelation::PrecRelation(int n, const std::vector<std::pair<int, int>>& edges,
                           const std::vector<int>& topo)
    : n_(n), words_((n + 63) / 64) {
  succ_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(words_),
               0);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n) + 1);
  for (const auto& [u, v] : edges) out[static_cast<std::size_t>(u)].push_back(v);
  // Reverse topological sweep: succ(u) = direct successors plus their succ.
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int u = *it;
    std::uint64_t* row = &succ_[static_cast<std::size_t>(u - 1) *
                                static_cast<std::size_t>(words_)];
    for (int v : out[static_cast<std::size_t>(u)]) {
      row[(v - 1) >> 6] |= std::uint64_t{1} << ((v - 1) & 63);
      const std::uint64_t* vrow = &succ_[static_cast<std::size_t>(v - 1) *
                                         static_cast<std::size_t>(words_)];
      for (int w = 0; w < words_; ++w) row[w] |= vrow[w];
    }
  }
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v)
      if (before(u, v)) pairs_.emplace_back(u, v);
}

Instance Instance::make(int n, int m, std::vector<std::pair<int, int>> prec) {
  if (n < 1)
    throw InstanceError(InstanceError::Kind::Range, 0,
                        "job count must be at least 1");
  if (m < 1)
    throw InstanceError(InstanceError::Kind::Range, 0,
                        "machine count must be at least 1");
  for (const auto& [u, v] : prec) {
    if (u < 1 || u > n || v < 1 || v > n)
      throw InstanceError(InstanceError::Kind::Range, 0,
                          "edge (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") references a job outside 1.." +
                              std::to_string(n));
    if (u == v)
      throw InstanceError(InstanceError::Kind::Cycle, 0,
                          "self-loop on job " + std::to_string(u));
  }
  std::sort(prec.begin(), prec.end());
  prec.erase(std::unique(prec.begin(), prec.end()), prec.end());

  Instance inst;
  inst.n_ = n;
  inst.m_ = m;
  inst.edges_ = std::move(prec);
  inst.topo_ = toposort_or_throw(n, inst.edges_);
  inst.closure_ = PrecRelation(n, inst.edges_, inst.topo_);
  return inst;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int n = 0, m = 0;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag.empty() || tag == "c") continue;
    if (tag == "p") {
      if (have_header)
        throw InstanceError(InstanceError::Kind::Header, line_no,
                            "duplicate header");
      std::string kind;
      std::string extra;
      if (!(fields >> kind >> n >> m) || kind != "sched" || (fields >> extra))
        throw InstanceError(InstanceError::Kind::Header, line_no,
                            "malformed header, expected 'p sched <n> <m>'");
      if (n < 1 || m < 1)
        throw InstanceError(InstanceError::Kind::Header, line_no,
                            "job and machine counts must be at least 1");
      have_header = true;
    } else if (tag == "e") {
      if (!have_header)
        throw InstanceError(InstanceError::Kind::Edge, line_no,
                            "edge before header");
      int u = 0, v = 0;
      std::string extra;
      if (!(fields >> u >> v) || (fields >> extra))
        throw InstanceError(InstanceError::Kind::Edge, line_no,
                            "malformed edge, expected 'e <u> <v>'");
      if (u < 1 || u > n || v < 1 || v > n)
        throw InstanceError(InstanceError::Kind::Range, line_no,
                            "edge references a job outside 1.." +
                                std::to_string(n));
      edges.emplace_back(u, v);
    } else {
      throw InstanceError(InstanceError::Kind::Edge, line_no,
                          "unknown record '" + tag + "'");
    }
  }
  if (!have_header)
    throw InstanceError(InstanceError::Kind::Header, 0, "missing header");
  return Instance::make(n, m, std::move(edges));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p sched " << inst.jobs() << " " << inst.machines() << "\n";
  for (const auto& [u, v] : inst.edges()) out << "e " << u << " " << v << "\n";
  return out.str();
}

Instance parse_instance_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(InstanceError::Kind::Header, 0,
                        std::string("bad json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("m") ||
      !doc["n"].is_number_integer() || !doc["m"].is_number_integer())
    throw InstanceError(InstanceError::Kind::Header, 0,
                        "json instance needs integer fields n and m");
  std::vector<std::pair<int, int>> edges;
  if (doc.contains("prec")) {
    if (!doc["prec"].is_array())
      throw InstanceError(InstanceError::Kind::Edge, 0,
                          "prec must be an array of [u, v] pairs");
    for (const auto& entry : doc["prec"]) {
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number_integer() || !entry[1].is_number_integer())
        throw InstanceError(InstanceError::Kind::Edge, 0,
                            "prec must be an array of [u, v] pairs");
      edges.emplace_back(entry[0].get<int>(), entry[1].get<int>());
    }
  }
  return Instance::make(doc["n"].get<int>(), doc["m"].get<int>(),
                        std::move(edges));
}

std::string serialize_instance_json(const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["n"] = inst.jobs();
  doc["m"] = inst.machines();
  auto prec = nlohmann::ordered_json::array();
  for (const auto& [u, v] : inst.edges()) prec.push_back({u, v});
  doc["prec"] = std::move(prec);
  return doc.dump();
}

Instance parse_instance_auto(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return parse_instance_json(text);
    break;
  }
  return parse_instance(text);
}

Instance generate_gnp(int n, int m, const Rational& p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rng.coin(p)) edges.emplace_back(u, v);
  return Instance::make(n, m, std::move(edges));
}

Instance generate_chain(int n, int m) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j) edges.emplace_back(j, j + 1);
  return Instance::make(n, m, std::move(edges));
}

Instance generate_layered(int n, int m, int layers) {
  if (layers < 1 || layers > n)
    throw InstanceError(InstanceError::Kind::Range, 0,
                        "layer count must be in 1..n");
  const int base = n / layers;
  const int extra = n % layers;
  std::vector<std::vector<int>> groups;
  int next_id = 1;
  for (int g = 0; g < layers; ++g) {
    const int size = base + (g < extra ? 1 : 0);
    std::vector<int> group;
    for (int i = 0; i < size; ++i) group.push_back(next_id++);
    groups.push_back(std::move(group));
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g)
    for (int u : groups[g])
      for (int v : groups[g + 1]) edges.emplace_back(u, v);
  return Instance::make(n, m, std::move(edges));
}

std::vector<int> longest_chain(const PrecRelation& rel,
                               const std::vector<int>& jobs) {
  if (jobs.empty()) return {};
  // len[j] = longest chain starting at j inside the subset.
  std::vector<int> sorted(jobs);
  std::sort(sorted.begin(), sorted.end());
  std::vector<char> in_set(static_cast<std::size_t>(rel.jobs()) + 1, 0);
  for (int j : sorted) in_set[static_cast<std::size_t>(j)] = 1;

  // Kahn order restricted to the subset using closure edges.
  std::vector<std::vector<int>> out(static_cast<std::size_t>(rel.jobs()) + 1);
  std::vector<int> indeg(static_cast<std::size_t>(rel.jobs()) + 1, 0);
  for (int u : sorted)
    for (int v : sorted)
      if (u != v && rel.before(u, v)) {
        out[static_cast<std::size_t>(u)].push_back(v);
        ++indeg[static_cast<std::size_t>(v)];
      }
  std::vector<int> stack;
  for (int j : sorted)
    if (indeg[static_cast<std::size_t>(j)] == 0) stack.push_back(j);
  std::vector<int> order;
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    order.push_back(j);
    for (int v : out[static_cast<std::size_t>(j)])
      if (--indeg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  }

  std::vector<int> len(static_cast<std::size_t>(rel.jobs()) + 1, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int best = 0;
    for (int v : out[static_cast<std::size_t>(*it)])
      best = std::max(best, len[static_cast<std::size_t>(v)]);
    len[static_cast<std::size_t>(*it)] = best + 1;
  }
  int total = 0;
  for (int j : sorted) total = std::max(total, len[static_cast<std::size_t>(j)]);

  // Greedy reconstruction: the smallest id that still admits a maximum
  // chain, extended one link at a time, is the lexicographically smallest
  // maximum chain.
  std::vector<int> chain;
  int need = total;
  int prev = 0;
  while (need > 0) {
    for (int j : sorted) {
      if (len[static_cast<std::size_t>(j)] != need) continue;
      if (prev != 0 && !rel.before(prev, j)) continue;
      chain.push_back(j);
      prev = j;
      break;
    }
    --need;
  }
  return chain;
}

}  // namespace schedlift
