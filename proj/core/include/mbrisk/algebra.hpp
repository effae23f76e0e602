#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>

#include "mbrisk/model.hpp"

namespace mbrisk {

/// (A * B)(m) = sum_{k=0}^{m} A(k) B(m-k). The product keeps path order:
/// the A-step happens first.
/// Throws ValidationError on a dimension mismatch.
MatrixSeq convolve(const MatrixSeq& a, const MatrixSeq& b);

/// Memo table of the n-fold convolutions Lambda^{*n} of one claim kernel.
/// nfold(0) is the identity sequence delta_0. Safe for concurrent use; the
/// returned references stay valid for the lifetime of the cache.
class ConvCache {
 public:
  explicit ConvCache(MatrixSeq kernel);

  const MatrixSeq& kernel() const { return kernel_; }
  const MatrixSeq& nfold(std::size_t n) const;

  /// Lambda^{*n}(m), the zero matrix outside the support.
  Matrix at(std::size_t n, std::size_t m) const { return nfold(n).at(m); }

 private:
  MatrixSeq kernel_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, MatrixSeq> table_;
};

}  // namespace mbrisk
