#pragma once

// Exact-arithmetic certificate for the degree 256 field N' over
// F = Q(sqrt 7, sqrt 13) with root discriminant 2^(7/4) sqrt(273).

#include <array>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cftower/biquad_field.hpp"

namespace cft {

/// One named claim together with the exact data that decides it.
struct NamedCheck {
  std::string name;
  bool passed = false;
  std::string witness;

  bool operator==(const NamedCheck&) const = default;
};

struct RootDiscriminant {
  mpq_class two_exponent;   // a_2
  mpz_class radicand;       // product of the odd ramified primes, each to a_p = 1/2
  std::string decimal;      // 2^a_2 * sqrt(radicand) rounded to 4 places

  bool operator==(const RootDiscriminant&) const = default;
};

struct NPrimeCertificate {
  std::array<BiquadElem, 4> nu_values;  // nu_{1,1}, nu_{1,2}, nu_{2,1}, nu_{2,2}
  std::vector<BiquadElem> C_set;        // 7, 13, -1, gamma, nu_{i,j}
  BiquadElem eps7, eps13, eps91, nu, gamma;
  std::vector<std::string> assumed_inputs;
  std::vector<NamedCheck> checks;
  std::map<u64, mpq_class> a_p;
  RootDiscriminant root_disc;

  bool passed() const;
};

// Elements of F = Q(sqrt 7, sqrt 13); i, j in {1, 2}.
BiquadElem nprime_nu(int i, int j);
BiquadElem nprime_eps7();
BiquadElem nprime_eps13();
BiquadElem nprime_eps91();
BiquadElem nprime_nu_unit();
BiquadElem nprime_gamma();

/// h_L = (1/4) [O_L* : O_1* O_2* O_3*] h_1 h_2 h_3.
mpq_class herglotz_class_number(unsigned unit_index, unsigned h1, unsigned h2, unsigned h3);

/// Root discriminant of Q(zeta_{2^k}) as a power of 2; k >= 2.
mpq_class cyclotomic_two_power_root_disc_exponent(unsigned k);

/// Renders 2^two_exponent * sqrt(radicand) with `places` decimals.
std::string render_root_discriminant(const mpq_class& two_exponent, const mpz_class& radicand,
                                     int places = 4);

std::vector<NamedCheck> verify_nu_norm();
std::vector<NamedCheck> verify_units();
std::vector<NamedCheck> verify_herglotz();
std::vector<NamedCheck> verify_local_integrality();
std::vector<NamedCheck> verify_degree_256();
std::vector<NamedCheck> verify_root_discriminant(std::map<u64, mpq_class>* a_p = nullptr,
                                                 RootDiscriminant* value = nullptr);

/// Runs every check. Never throws for a failed claim; failures are recorded
/// in `checks`.
NPrimeCertificate build_nprime_certificate();

}  // namespace cft
