#pragma once

// Set-packing instances: the universe, the collection of k-sets, packings
// over them, and single-step improvements.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpack {

// Parse failures carry the 1-based line number of the offending input line.
class parse_error : public std::runtime_error {
 public:
  parse_error(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Raised when an internal table or witness is inconsistent (CLI exit 3).
class internal_error : public std::logic_error {
  using std::logic_error::logic_error;
};

// A collection of uniform-size k-sets over elements 0..universe_size-1.
// Normalized form: every set has exactly k distinct sorted elements, no two
// sets are identical. Elements >= pad_begin are padding added to reach
// uniform size k; they occur in exactly one set each and are omitted when
// the instance is serialized.
struct SetSystem {
  int universe_size = 0;
  int k = 0;
  int pad_begin = 0;  // first padding element id; == universe_size if none
  std::vector<std::vector<int>> sets;

  int n_sets() const { return static_cast<int>(sets.size()); }
  bool operator==(const SetSystem&) const = default;
};

// Indices into SetSystem::sets, pairwise disjoint, kept sorted.
struct Packing {
  std::vector<int> members;

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int set_index) const;
  bool operator==(const Packing&) const = default;
};

// Swap `remove` (inside the packing) for `add` (outside it); |add| =
// |remove| + 1 and the result must again be a packing.
struct Improvement {
  std::vector<int> remove;
  std::vector<int> add;
  bool operator==(const Improvement&) const = default;
};

// Instance text format:
//   c <comment>
//   p setpack <universe_size> <n_sets> <k>
//   <set line: whitespace-separated 1-based element ids>...
SetSystem parse_instance(const std::string& text);
std::string serialize_instance(const SetSystem& sys);

// Grows every set to exactly k elements using fresh padding elements
// (appended at the top of the id space, one use each). Already-uniform
// systems are returned unchanged. Empty sets are rejected.
SetSystem pad_to_uniform(const SetSystem& raw);

// n_sets distinct k-subsets of {0..universe_size-1}, uniform, deterministic
// per seed. Throws std::invalid_argument on impossible parameters.
SetSystem gen_random(int n_sets, int k, int universe_size, std::uint64_t seed);

// True iff all indices are valid and distinct and the member sets are
// pairwise disjoint.
bool verify_packing(const SetSystem& sys, const Packing& p);

// True iff imp is applicable to `a` and the result would be a valid packing
// one larger. When `reason` is given it receives a diagnostic on failure.
bool verify_improvement(const SetSystem& sys, const Packing& a,
                        const Improvement& imp, std::string* reason = nullptr);

bool sets_intersect(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace kpack
