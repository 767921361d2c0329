#pragma once

#include <cmath>
#include <cstdio>
#include <string>

// Minimal check helpers for the main()-style test binaries: each failed
// check prints its location and bumps the global counter; main() returns it.

namespace testkit {

inline int failures = 0;

inline void report(bool ok, const std::string& what, const char* file, int line) {
  if (!ok) {
    ++failures;
    std::printf("FAIL %s:%d  %s\n", file, line, what.c_str());
  }
}

inline bool near_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool near_rel(double a, double b, double rtol) {
  return std::abs(a - b) <= rtol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testkit

#define CHECK(expr) ::testkit::report((expr), #expr, __FILE__, __LINE__)

#define CHECK_NEAR(a, b, tol)                                                      \
  ::testkit::report(::testkit::near_abs((a), (b), (tol)),                          \
                    std::string(#a " == " #b " +- " #tol) + "  (got " +            \
                        std::to_string(static_cast<double>(a)) + " vs " +          \
                        std::to_string(static_cast<double>(b)) + ")",              \
                    __FILE__, __LINE__)

#define CHECK_REL(a, b, rtol)                                                      \
  ::testkit::report(::testkit::near_rel((a), (b), (rtol)),                         \
                    std::string(#a " ~= " #b " rel " #rtol) + "  (got " +          \
                        std::to_string(static_cast<double>(a)) + " vs " +          \
                        std::to_string(static_cast<double>(b)) + ")",              \
                    __FILE__, __LINE__)

#define CHECK_THROWS(stmt)                                                         \
  do {                                                                             \
    bool thrown_ = false;                                                          \
    try {                                                                          \
      stmt;                                                                        \
    } catch (const std::exception&) {                                              \
      thrown_ = true;                                                              \
    }                                                                              \
    ::testkit::report(thrown_, #stmt " should throw", __FILE__, __LINE__);         \
  } while (0)

#define TEST_MAIN()                                                                \
  int main() {                                                                     \
    run_all();                                                                     \
    if (::testkit::failures == 0) std::printf("all checks passed\n");              \
    else std::printf("%d check(s) failed\n", ::testkit::failures);                 \
    return ::testkit::failures == 0 ? 0 : 1;                                       \
  }
