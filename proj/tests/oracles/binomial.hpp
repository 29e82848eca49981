#pragma once

// Exact binomial CDF for p = num/den in integer arithmetic:
// Pr[Z <= k] = sum_z C(n,z) num^z (den-num)^(n-z) / den^n. Test-only oracle.

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_rational binomial_cdf_rational(unsigned trials, unsigned num, unsigned den, int k) {
  const cpp_int a = num;
  const cpp_int b = den - num;
  cpp_int total = 0;
  cpp_int choose = 1;  // C(trials, z)
  for (int z = 0; z <= k && z <= static_cast<int>(trials); ++z) {
    total += choose * boost::multiprecision::pow(a, static_cast<unsigned>(z)) *
             boost::multiprecision::pow(b, trials - static_cast<unsigned>(z));
    choose = choose * (trials - static_cast<unsigned>(z)) / (static_cast<unsigned>(z) + 1);
  }
  return cpp_rational(total, boost::multiprecision::pow(cpp_int(den), trials));
}

inline double to_double(const cpp_rational& r) { return r.convert_to<double>(); }

}  // namespace oracle
