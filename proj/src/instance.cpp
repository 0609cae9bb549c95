#include "kpack/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kpack {

bool Packing::contains(int set_index) const {
  return std::binary_search(members.begin(), members.end(), set_index);
}

bool sets_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib)
      ++ia;
    else
      ++ib;
  }
  return false;
}

namespace {

std::vector<int> normalize_set(std::vector<int> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

SetSystem parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int declared_sets = 0;
  SetSystem sys;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "c") continue;
    if (!have_header) {
      if (first != "p") throw parse_error(line_no, "expected 'p setpack' header");
      std::string kind;
      if (!(ls >> kind) || kind != "setpack")
        throw parse_error(line_no, "expected 'p setpack' header");
      if (!(ls >> sys.universe_size >> declared_sets >> sys.k))
        throw parse_error(line_no, "malformed header: need universe, n_sets, k");
      if (sys.universe_size < 0 || declared_sets < 0 || sys.k < 1)
        throw parse_error(line_no, "malformed header: counts out of range");
      sys.pad_begin = sys.universe_size;
      have_header = true;
      continue;
    }
    // Set line; `first` is already the first element id.
    std::vector<int> elems;
    std::istringstream es(line);
    long long id;
    while (es >> id) {
      if (id < 1 || id > sys.universe_size)
        throw parse_error(line_no, "element id " + std::to_string(id) +
                                       " out of range 1.." +
                                       std::to_string(sys.universe_size));
      elems.push_back(static_cast<int>(id - 1));
    }
    if (es.fail() && !es.eof())
      throw parse_error(line_no, "malformed set line");
    elems = normalize_set(std::move(elems));
    if (static_cast<int>(elems.size()) > sys.k)
      throw parse_error(line_no, "set has " + std::to_string(elems.size()) +
                                     " elements, larger than declared k=" +
                                     std::to_string(sys.k));
    if (elems.empty()) throw parse_error(line_no, "empty set");
    sys.sets.push_back(std::move(elems));
  }
  if (!have_header) throw parse_error(line_no, "missing 'p setpack' header");
  if (sys.n_sets() != declared_sets)
    throw parse_error(line_no, "header declared " + std::to_string(declared_sets) +
                                   " sets, file has " + std::to_string(sys.n_sets()));

  // Duplicates removed, first occurrence kept.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> unique_sets;
  for (auto& s : sys.sets)
    if (seen.insert(s).second) unique_sets.push_back(std::move(s));
  sys.sets = std::move(unique_sets);

  return pad_to_uniform(sys);
}

std::string serialize_instance(const SetSystem& sys) {
  std::ostringstream out;
  out << "p setpack " << sys.pad_begin << ' ' << sys.n_sets() << ' ' << sys.k
      << '\n';
  for (const auto& s : sys.sets) {
    bool first = true;
    for (int e : s) {
      if (e >= sys.pad_begin) continue;  // padding is implicit
      if (!first) out << ' ';
      out << e + 1;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

SetSystem pad_to_uniform(const SetSystem& raw) {
  for (const auto& s : raw.sets) {
    if (s.empty()) throw std::invalid_argument("pad_to_uniform: empty set");
    if (static_cast<int>(s.size()) > raw.k)
      throw std::invalid_argument("pad_to_uniform: set larger than k");
  }
  bool uniform = true;
  for (const auto& s : raw.sets)
    if (static_cast<int>(s.size()) != raw.k) uniform = false;
  if (uniform) return raw;

  SetSystem sys = raw;
  sys.pad_begin = raw.universe_size;
  int next_fresh = raw.universe_size;
  for (auto& s : sys.sets) {
    while (static_cast<int>(s.size()) < sys.k) s.push_back(next_fresh++);
  }
  sys.universe_size = next_fresh;
  return sys;
}

SetSystem gen_random(int n_sets, int k, int universe_size, std::uint64_t seed) {
  if (k < 1 || n_sets < 1)
    throw std::invalid_argument("gen_random: n_sets and k must be positive");
  if (universe_size < k)
    throw std::invalid_argument("gen_random: universe_size < k");

  // Distinct sets must exist: n_sets <= C(universe_size, k).
  double log_choose = 0.0;
  for (int i = 0; i < k; ++i)
    log_choose += std::log(double(universe_size - i) / double(i + 1));
  if (std::log(double(n_sets)) > log_choose)
    throw std::invalid_argument("gen_random: n_sets exceeds distinct k-sets");

  std::mt19937_64 rng(seed);
  SetSystem sys;
  sys.universe_size = universe_size;
  sys.pad_begin = universe_size;
  sys.k = k;
  std::set<std::vector<int>> seen;
  while (sys.n_sets() < n_sets) {
    std::vector<int> s;
    while (static_cast<int>(s.size()) < k) {
      int e = static_cast<int>(rng() % universe_size);
      if (std::find(s.begin(), s.end(), e) == s.end()) s.push_back(e);
    }
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) sys.sets.push_back(std::move(s));
  }
  return sys;
}

bool verify_packing(const SetSystem& sys, const Packing& p) {
  std::vector<char> used_set(sys.sets.size(), 0);
  std::vector<char> used_elem(sys.universe_size, 0);
  for (int idx : p.members) {
    if (idx < 0 || idx >= sys.n_sets()) return false;
    if (used_set[idx]) return false;
    used_set[idx] = 1;
    for (int e : sys.sets[idx]) {
      if (used_elem[e]) return false;
      used_elem[e] = 1;
    }
  }
  return true;
}

bool verify_improvement(const SetSystem& sys, const Packing& a,
                        const Improvement& imp, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (imp.add.size() != imp.remove.size() + 1)
    return fail("|add| must equal |remove| + 1");
  for (int idx : imp.remove) {
    if (idx < 0 || idx >= sys.n_sets()) return fail("remove index out of range");
    if (!a.contains(idx)) return fail("remove index not in packing");
  }
  for (int idx : imp.add) {
    if (idx < 0 || idx >= sys.n_sets()) return fail("add index out of range");
    if (a.contains(idx)) return fail("add index already in packing");
  }
  std::set<int> removed(imp.remove.begin(), imp.remove.end());
  if (removed.size() != imp.remove.size()) return fail("duplicate remove index");
  std::set<int> added(imp.add.begin(), imp.add.end());
  if (added.size() != imp.add.size()) return fail("duplicate add index");

  std::vector<char> used_elem(sys.universe_size, 0);
  for (int idx : a.members) {
    if (removed.count(idx)) continue;
    for (int e : sys.sets[idx]) used_elem[e] = 1;
  }
  for (int idx : imp.add)
    for (int e : sys.sets[idx]) {
      if (used_elem[e]) return fail("add sets overlap the surviving packing");
      used_elem[e] = 1;
    }
  return true;
}

}  // namespace kpack
