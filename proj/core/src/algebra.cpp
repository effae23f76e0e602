#include "mbrisk/algebra.hpp"

#include "mbrisk/error.hpp"

namespace mbrisk {

MatrixSeq convolve(const MatrixSeq& a, const MatrixSeq& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("convolve: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  const auto d = static_cast<Eigen::Index>(a.dim());
  std::map<std::size_t, Matrix> acc;
  for (const auto& [i, ai] : a.entries()) {
    for (const auto& [j, bj] : b.entries()) {
      auto [it, fresh] = acc.try_emplace(i + j, Matrix::Zero(d, d));
      it->second.noalias() += ai * bj;
    }
  }
  MatrixSeq out(a.dim());
  for (auto& [m, mat] : acc) out.set(m, std::move(mat));
  return out;
}

ConvCache::ConvCache(MatrixSeq kernel) : kernel_(std::move(kernel)) {
  table_.emplace(0, MatrixSeq::identity(kernel_.dim()));
  table_.emplace(1, kernel_);
}

const MatrixSeq& ConvCache::nfold(std::size_t n) const {
  std::lock_guard lock(mutex_);
  auto it = table_.lower_bound(n);
  if (it != table_.end() && it->first == n) return it->second;
  // Extend from the largest cached order below n.
  auto prev = std::prev(it);
  for (std::size_t k = prev->first + 1; k <= n; ++k) {
    prev = table_.emplace_hint(std::next(prev), k, convolve(prev->second, kernel_));
  }
  return prev->second;
}

}  // namespace mbrisk
