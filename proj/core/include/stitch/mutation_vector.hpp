#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stitch {

// Mutation selection [j1|...|jm]: position i picks the j_i-th applicable
// mutation of mutable statement S_(i+1) (counted from the bottom of the
// method); 0 picks none. Position 0 is least significant in the
// lexicographic enumeration order.
struct MutationVector {
  std::vector<int> j;

  bool isZero() const {
    for (int v : j)
      if (v != 0) return false;
    return true;
  }
  std::string str() const;
  bool operator==(const MutationVector& o) const { return j == o.j; }
};

// Lexicographic enumeration with carry, plus the pruning jumps: zeroing a
// prefix and carry-advancing at a given index, both relative to the vector
// most recently returned. After a jump, next() returns the jumped-to vector
// itself (it has not been visited).
class VectorIterator {
 public:
  explicit VectorIterator(std::vector<int> arities);

  bool hasNext() const;
  MutationVector next();

  void setToZeroAllPositionsInRange(int lo, int hi);  // inclusive
  void advanceOneStartingAtIndex(int idx);

  const std::vector<int>& arities() const { return k_; }
  const std::vector<int>& current() const { return last_; }

  // Mixed-radix rank of a vector (position 0 least significant); saturates.
  static uint64_t rank(const MutationVector& v, const std::vector<int>& arities);
  // Number of vectors: product of (k_i + 1); saturates.
  static uint64_t totalCount(const std::vector<int>& arities);
  // Carry-add 1 at position idx; nullopt when the carry leaves the space.
  static std::optional<MutationVector> advanceOneAt(MutationVector v,
                                                    const std::vector<int>& arities, int idx);

 private:
  bool atMax() const;

  std::vector<int> k_;
  std::vector<int> last_;
  bool fresh_ = true;
  bool pending_ = false;
  bool exhausted_ = false;
};

}  // namespace stitch
