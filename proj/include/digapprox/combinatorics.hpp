#ifndef DIGAPPROX_COMBINATORICS_HPP
#define DIGAPPROX_COMBINATORICS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "digapprox/errors.hpp"

namespace digapprox {

using BigInt = boost::multiprecision::cpp_int;

/// n choose k; zero outside 0 <= k <= n. Throws on 64-bit overflow.
inline std::uint64_t binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw ValidationError("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

inline BigInt binomial_big(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// Calls f(const std::vector<int>&) for every k-subset of `universe`, in
/// lexicographic order of positions. `universe` should be ascending for the
/// subsets to come out ascending.
template <typename F>
void for_each_combination(const std::vector<int>& universe, int k, F&& f) {
  const int n = static_cast<int>(universe.size());
  if (k < 0 || k > n) return;
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  std::vector<int> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = universe[pos[i]];
    f(static_cast<const std::vector<int>&>(subset));
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) return;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace digapprox

#endif  // DIGAPPROX_COMBINATORICS_HPP
