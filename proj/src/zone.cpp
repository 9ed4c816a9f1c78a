#include "tpo/zone.hpp"

#include <algorithm>

namespace tpo {

Zone::Zone(std::size_t dimension) : dim_(dimension), m_(dimension * dimension, kInfinity) {
  for (std::size_t i = 0; i < dim_; ++i) at(i, i) = 0.0;
}

Zone Zone::origin(std::size_t dimension) {
  Zone z(dimension);
  std::fill(z.m_.begin(), z.m_.end(), 0.0);
  return z;
}

void Zone::constrain(std::size_t i, std::size_t j, double c) {
  if (c >= upper(i, j)) return;
  at(i, j) = c;
  if (!canonical_) return;
  // Incremental closure: only paths through the new arc i -> j can improve.
  for (std::size_t a = 0; a < dim_; ++a) {
    const double to_i = upper(a, i);
    if (to_i == kInfinity) continue;
    for (std::size_t b = 0; b < dim_; ++b) {
      const double from_j = upper(j, b);
      if (from_j == kInfinity) continue;
      const double via = to_i + c + from_j;
      if (via < upper(a, b)) at(a, b) = via;
    }
  }
}

void Zone::canonicalize() {
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const double ik = upper(i, k);
      if (ik == kInfinity) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double via = ik + upper(k, j);
        if (via < upper(i, j)) at(i, j) = via;
      }
    }
  }
  canonical_ = true;
}

bool Zone::is_empty() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (upper(i, i) < 0.0) return true;
  }
  return false;
}

void Zone::up() {
  for (std::size_t j = 1; j < dim_; ++j) at(0, j) = kInfinity;
}

void Zone::reset(std::size_t k) {
  for (std::size_t j = 0; j < dim_; ++j) {
    if (j == k) continue;
    at(k, j) = upper(0, j);
    at(j, k) = upper(j, 0);
  }
  at(k, k) = 0.0;
}

Zone Zone::convex_union(const Zone& other) const {
  Zone result = *this;
  for (std::size_t idx = 0; idx < m_.size(); ++idx) result.m_[idx] = std::max(m_[idx], other.m_[idx]);
  result.canonical_ = canonical_ && other.canonical_;
  return result;
}

bool Zone::contains(std::span<const double> values) const {
  auto value = [&](std::size_t i) { return i == 0 ? 0.0 : values[i]; };
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (value(j) - value(i) > upper(i, j)) return false;
    }
  }
  return true;
}

}  // namespace tpo
