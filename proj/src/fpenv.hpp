#ifndef LXT_SRC_FPENV_HPP_
#define LXT_SRC_FPENV_HPP_

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace lxt::detail {

/// Sets flush-to-zero and denormals-are-zero on the calling thread for its lifetime.
class FlushDenormals {
 public:
#if defined(__SSE__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushDenormals() { _mm_setcsr(saved_); }
#else
  FlushDenormals() = default;
#endif
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
#if defined(__SSE__)
  unsigned saved_;
#endif
};

}  // namespace lxt::detail

#endif  // LXT_SRC_FPENV_HPP_
