#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace rig::comb {

// Stirling numbers of the second kind S(n, k).
inline double stirling2(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, 0.0));
  s[0][0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

// Signed Stirling numbers of the first kind: (x)_n = sum_k s(n,k) x^k.
inline double stirling1_signed(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, 0.0));
  s[0][0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] - (i - 1) * s[i - 1][j];
  return s[n][k];
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double falling(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (x - i);
  return r;
}

// Calls f(parts) for every composition of n into positive parts, in
// lexicographic order of the parts sequence.
inline void for_each_composition(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> parts;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      f(parts);
      return;
    }
    for (int p = 1; p <= rest; ++p) {
      parts.push_back(p);
      rec(rest - p);
      parts.pop_back();
    }
  };
  if (n > 0) rec(n);
}

inline double multinomial(const std::vector<int>& parts) {
  int total = 0;
  double r = 1.0;
  for (int p : parts) {
    for (int i = 1; i <= p; ++i) r = r * (total + i) / i;
    total += p;
  }
  return r;
}

}  // namespace rig::comb
