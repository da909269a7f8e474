#include "stitch/mutation_vector.hpp"

#include <limits>
#include <sstream>

#include "stitch/diagnostics.hpp"

namespace stitch {

std::string MutationVector::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < j.size(); i++) {
    if (i) os << "|";
    os << j[i];
  }
  os << "]";
  return os.str();
}

VectorIterator::VectorIterator(std::vector<int> arities) : k_(std::move(arities)) {
  for (int a : k_)
    if (a < 0) throw InternalError("negative arity");
  last_.assign(k_.size(), 0);
}

bool VectorIterator::atMax() const {
  for (size_t i = 0; i < k_.size(); i++)
    if (last_[i] != k_[i]) return false;
  return true;
}

bool VectorIterator::hasNext() const {
  if (exhausted_) return false;
  if (fresh_ || pending_) return true;
  return !atMax();
}

MutationVector VectorIterator::next() {
  if (!hasNext()) throw InternalError("iterator exhausted");
  if (fresh_) {
    fresh_ = false;
    return MutationVector{last_};
  }
  if (pending_) {
    pending_ = false;
    return MutationVector{last_};
  }
  // carry-add 1 at position 0
  size_t i = 0;
  while (i < last_.size()) {
    if (last_[i] < k_[i]) {
      last_[i]++;
      break;
    }
    last_[i] = 0;
    i++;
  }
  if (i == last_.size()) throw InternalError("iterator overflow");
  return MutationVector{last_};
}

void VectorIterator::setToZeroAllPositionsInRange(int lo, int hi) {
  if (fresh_) fresh_ = false;
  for (int i = lo; i <= hi && i < static_cast<int>(last_.size()); i++)
    if (i >= 0) last_[static_cast<size_t>(i)] = 0;
  pending_ = true;
}

void VectorIterator::advanceOneStartingAtIndex(int idx) {
  if (fresh_) fresh_ = false;
  if (idx < 0 || idx > static_cast<int>(last_.size()))
    throw InternalError("advance index out of range");
  size_t i = static_cast<size_t>(idx);
  while (i < last_.size()) {
    if (last_[i] < k_[i]) {
      last_[i]++;
      pending_ = true;
      return;
    }
    last_[i] = 0;
    i++;
  }
  exhausted_ = true;  // carried past the top position
  pending_ = false;
}

uint64_t VectorIterator::rank(const MutationVector& v, const std::vector<int>& arities) {
  uint64_t r = 0, radix = 1;
  const uint64_t kMax = std::numeric_limits<uint64_t>::max();
  for (size_t i = 0; i < v.j.size(); i++) {
    uint64_t term = static_cast<uint64_t>(v.j[i]);
    if (radix != 0 && term > kMax / (radix ? radix : 1)) return kMax;
    term *= radix;
    if (r > kMax - term) return kMax;
    r += term;
    uint64_t base = static_cast<uint64_t>(arities[i]) + 1;
    if (radix > kMax / base) {
      radix = 0;  // saturated; further positions must be zero to matter
    } else {
      radix *= base;
    }
  }
  return r;
}

std::optional<MutationVector> VectorIterator::advanceOneAt(MutationVector v,
                                                           const std::vector<int>& arities,
                                                           int idx) {
  size_t i = static_cast<size_t>(idx);
  while (i < v.j.size()) {
    if (v.j[i] < arities[i]) {
      v.j[i]++;
      return v;
    }
    v.j[i] = 0;
    i++;
  }
  return std::nullopt;
}

uint64_t VectorIterator::totalCount(const std::vector<int>& arities) {
  const uint64_t kMax = std::numeric_limits<uint64_t>::max();
  uint64_t n = 1;
  for (int a : arities) {
    uint64_t base = static_cast<uint64_t>(a) + 1;
    if (n > kMax / base) return kMax;
    n *= base;
  }
  return n;
}

}  // namespace stitch
