#include "cftower/nprime.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include <mpfr.h>

#include "cftower/errors.hpp"
#include "cftower/quad_field.hpp"

namespace cft {

namespace {

constexpr i64 kP = 7;
constexpr i64 kQ = 13;

BiquadElem elem(mpz_class n0, mpz_class n1, mpz_class n2, mpz_class n3, mpz_class den = 1) {
  return BiquadElem(kP, kQ, {std::move(n0), std::move(n1), std::move(n2), std::move(n3)}, std::move(den));
}

BiquadElem rational(long n) { return BiquadElem::integer(kP, kQ, n); }

NamedCheck check(std::string name, bool passed, std::string witness) {
  return {std::move(name), passed, std::move(witness)};
}

NamedCheck equality(std::string name, const BiquadElem& lhs, const BiquadElem& rhs) {
  const bool ok = lhs == rhs;
  return check(std::move(name), ok, lhs.to_string() + (ok ? " == " : " != ") + rhs.to_string());
}

// True iff x is one of e, -e, 1/e, -1/e.
bool equal_up_to_sign_and_inversion(const BiquadElem& x, const BiquadElem& e) {
  const BiquadElem inv = e.inverse();
  return x == e || x == -e || x == inv || x == -inv;
}

SquareCertificate square_test(const BiquadElem& e) {
  try {
    return is_square_in_field(e, 20);
  } catch (const InvariantViolation&) {
    return is_square_in_field(e, 200);
  }
}

}  // namespace

bool NPrimeCertificate::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.passed; });
}

BiquadElem nprime_nu(int i, int j) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2)) throw DomainError("nprime_nu: indices must be 1 or 2");
  const int si = i == 1 ? -1 : 1;
  const int sj = j == 1 ? -1 : 1;
  return elem(-13, 5 * si, -8 * sj, 3 * si * sj);
}

BiquadElem nprime_eps7() { return elem(8, -3, 0, 0); }
BiquadElem nprime_eps13() { return elem(3, 0, 1, 0, 2); }
BiquadElem nprime_eps91() { return elem(1574, 0, 0, 165); }
BiquadElem nprime_nu_unit() { return elem(105, -45, -33, 11, 2); }
BiquadElem nprime_gamma() { return nprime_eps13(); }

mpq_class herglotz_class_number(unsigned unit_index, unsigned h1, unsigned h2, unsigned h3) {
  mpq_class h(static_cast<unsigned long>(unit_index) * h1 * h2 * h3, 4UL);
  h.canonicalize();
  return h;
}

mpq_class cyclotomic_two_power_root_disc_exponent(unsigned k) {
  if (k < 2) throw DomainError("cyclotomic_two_power_root_disc_exponent: k must be >= 2");
  // Q(zeta_{2^k}) has degree 2^(k-1) and ord_2 of its discriminant is 2^(k-1) (k - 1).
  const mpz_class degree = mpz_class(1) << (k - 1);
  mpq_class exponent(degree * (k - 1), degree);
  exponent.canonicalize();
  return exponent;
}

std::string render_root_discriminant(const mpq_class& two_exponent, const mpz_class& radicand,
                                     int places) {
  if (radicand <= 0) throw DomainError("render_root_discriminant: radicand must be positive");
  mpfr_t two_part, root, value;
  mpfr_inits2(256, two_part, root, value, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(two_part, 2, MPFR_RNDN);
  mpfr_t e;
  mpfr_init2(e, 256);
  mpfr_set_q(e, two_exponent.get_mpq_t(), MPFR_RNDN);
  mpfr_pow(two_part, two_part, e, MPFR_RNDN);
  mpfr_set_z(root, radicand.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(root, root, MPFR_RNDN);
  mpfr_mul(value, two_part, root, MPFR_RNDN);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.*Rf", places, value);
  std::string out(text);
  mpfr_free_str(text);
  mpfr_clears(two_part, root, value, e, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::vector<NamedCheck> verify_nu_norm() {
  std::vector<NamedCheck> out;
  const std::array<BiquadElem, 4> nus = {nprime_nu(1, 1), nprime_nu(1, 2), nprime_nu(2, 1), nprime_nu(2, 2)};

  const BiquadElem product = nus[0] * nus[1] * nus[2] * nus[3];
  out.push_back(equality("nu_product_is_minus_3", product, rational(-3)));
  const mpq_class norm = nus[0].norm();
  out.push_back(check("norm_nu11_is_minus_3", norm == -3, "N(nu_11) = " + norm.get_str()));

  bool closed = true;
  std::string witness;
  for (const auto& [sp, sq] : kEmbeddingSigns) {
    for (const auto& nu : nus) {
      const BiquadElem image = nu.galois(sp, sq);
      if (std::find(nus.begin(), nus.end(), image) == nus.end()) {
        closed = false;
        witness = "image " + image.to_string() + " outside the set";
      }
    }
  }
  if (closed) witness = "every Galois conjugate of every nu_{i,j} is some nu_{i',j'}";
  out.push_back(check("nu_conjugation_closure", closed, witness));

  bool integral = true;
  for (const auto& nu : nus) integral = integral && is_integral(nu);
  out.push_back(check("nu_integral", integral, "integer coordinates in {1, sqrt 7, sqrt 13, sqrt 91}"));
  return out;
}

std::vector<NamedCheck> verify_units() {
  std::vector<NamedCheck> out;
  const QuadInt e7(7, 8, -3);
  const QuadInt e13(13, 1, 1);  // (3 + sqrt 13)/2 = 1 + omega
  const QuadInt e91(91, 1574, 165);
  out.push_back(check("norm_eps7", e7.norm() == 1, "8^2 - 7*3^2 = " + e7.norm().get_str()));
  out.push_back(check("norm_eps13", e13.norm() == -1, "(9 - 13)/4 = " + e13.norm().get_str()));
  out.push_back(check("norm_eps91", e91.norm() == 1, "1574^2 - 91*165^2 = " + e91.norm().get_str()));

  if (!(BiquadElem::from_quad(kP, kQ, e7) == nprime_eps7()) ||
      !(BiquadElem::from_quad(kP, kQ, e13) == nprime_eps13()) ||
      !(BiquadElem::from_quad(kP, kQ, e91) == nprime_eps91())) {
    throw InvariantViolation("verify_units: quadratic and biquadratic unit encodings disagree");
  }

  const BiquadElem nu = nprime_nu_unit();
  out.push_back(equality("nu_squared_is_eps91_eps7", nu * nu, nprime_eps91() * nprime_eps7()));
  out.push_back(check("nu_unit_integral", is_integral(nu), "characteristic polynomial has integer coefficients"));

  const std::array<std::pair<i64, BiquadElem>, 3> expected = {
      std::pair{i64{7}, nprime_eps7()}, std::pair{i64{13}, nprime_eps13()}, std::pair{i64{91}, nprime_eps91()}};
  for (const auto& [d, unit] : expected) {
    const BiquadElem computed = BiquadElem::from_quad(kP, kQ, fundamental_unit(d).unit);
    out.push_back(check("fundamental_unit_" + std::to_string(d), equal_up_to_sign_and_inversion(computed, unit),
                        "continued fraction gives " + computed.to_string()));
  }
  return out;
}

std::vector<NamedCheck> verify_herglotz() {
  std::vector<NamedCheck> out;
  const BiquadElem minus_one = rational(-1);
  const std::array<BiquadElem, 4> gens = {minus_one, nprime_eps7(), nprime_eps13(), nprime_eps91()};
  const std::array<const char*, 4> names = {"-1", "eps7", "eps13", "eps91"};

  // [O_F* : <-1, eps7, eps13, eps91>] equals the number of classes of the
  // subgroup modulo squares of units that are squares in F.
  unsigned squares = 0;
  std::string found;
  for (unsigned mask = 0; mask < 16; ++mask) {
    BiquadElem x = rational(1);
    std::string label;
    for (unsigned k = 0; k < 4; ++k) {
      if (mask & (1U << k)) {
        x = x * gens[k];
        label += label.empty() ? names[k] : std::string("*") + names[k];
      }
    }
    if (label.empty()) label = "1";
    const SquareCertificate cert = square_test(x);
    if (cert.verdict == SquareVerdict::square_certified) {
      ++squares;
      found += (found.empty() ? "" : ", ") + label + " = (" + cert.root->to_string() + ")^2";
    }
  }
  out.push_back(check("unit_index_is_2", squares == 2, "square classes: " + found));

  const mpq_class h = herglotz_class_number(squares, 1, 1, 2);
  out.push_back(check("class_number_F_is_1", h == 1, "(1/4)*" + std::to_string(squares) + "*1*1*2 = " + h.get_str()));
  return out;
}

std::vector<NamedCheck> verify_local_integrality() {
  std::vector<NamedCheck> out;
  const BiquadElem pi = elem(3, 1, 0, 0);
  const BiquadElem pi_bar = elem(3, -1, 0, 0);
  const BiquadElem pi_sq = pi * pi;
  const BiquadElem nu11 = nprime_nu(1, 1);
  const BiquadElem one = rational(1);

  out.push_back(equality("pi_times_conjugate_is_2", pi * pi_bar, rational(2)));
  const BiquadElem trace_alpha = rational(2) / pi;
  out.push_back(equality("trace_alpha", trace_alpha, pi_bar));
  out.push_back(check("trace_alpha_integral", is_integral(trace_alpha), trace_alpha.to_string()));

  const BiquadElem one_minus_nu = one - nu11;
  // 14 + sqrt 7 * 2 * (5 - 3 sqrt 13)/2 - 8 sqrt 13
  out.push_back(equality("one_minus_nu11_expansion", one_minus_nu, elem(14, 5, -8, -3)));
  const BiquadElem beta = one_minus_nu / pi_sq;
  out.push_back(check("beta_integral", is_integral(beta), "beta = " + beta.to_string()));

  const BiquadElem disc_alpha = trace_alpha * trace_alpha - rational(4) * beta;
  out.push_back(equality("disc_alpha", disc_alpha, rational(4) * nu11 / pi_sq));

  const BiquadElem gamma3 = pow(nprime_gamma(), 3);
  const BiquadElem one_minus_g3 = one - gamma3;
  out.push_back(equality("one_minus_gamma_cubed", one_minus_g3, rational(2) * elem(-17, 0, -5, 0, 2)));
  const BiquadElem half = one_minus_g3 / rational(2);
  out.push_back(check("gamma_cubed_is_1_mod_2", is_integral(half), "(1 - gamma^3)/2 = " + half.to_string()));

  const BiquadElem norm_tau = one_minus_g3 / pi_sq;
  out.push_back(check("norm_tau_integral", is_integral(norm_tau), "N(tau) = " + norm_tau.to_string()));
  const BiquadElem disc_tau = trace_alpha * trace_alpha - rational(4) * norm_tau;
  out.push_back(equality("disc_tau", disc_tau, rational(4) * gamma3 / pi_sq));
  return out;
}

std::vector<NamedCheck> verify_degree_256() {
  std::vector<NamedCheck> out;
  const std::array<BiquadElem, 6> gens = {rational(-1),    nprime_gamma(),  nprime_nu(1, 1),
                                          nprime_nu(1, 2), nprime_nu(2, 1), nprime_nu(2, 2)};
  unsigned nonsquares = 0;
  std::string failures;
  for (unsigned mask = 1; mask < 64; ++mask) {
    BiquadElem x = rational(1);
    for (unsigned k = 0; k < 6; ++k) {
      if (mask & (1U << k)) x = x * gens[k];
    }
    try {
      const SquareCertificate cert = square_test(x);
      if (cert.verdict == SquareVerdict::nonsquare_witnessed) {
        ++nonsquares;
      } else {
        failures += " subset " + std::to_string(mask) + " is a square;";
      }
    } catch (const InvariantViolation& e) {
      failures += " subset " + std::to_string(mask) + ": " + e.what() + ";";
    }
  }
  out.push_back(check("kummer_independence", nonsquares == 63,
                      std::to_string(nonsquares) + " of 63 subset products witnessed nonsquare" + failures));
  const unsigned degree = 4U << 6;
  out.push_back(check("degree_is_256", nonsquares == 63 && degree == 256,
                      "[F:Q] * 2^6 = " + std::to_string(degree)));
  return out;
}

std::vector<NamedCheck> verify_root_discriminant(std::map<u64, mpq_class>* a_p, RootDiscriminant* value) {
  std::vector<NamedCheck> out;
  std::map<u64, mpq_class> exps;
  for (u64 p : {3, 7, 13}) exps[p] = mpq_class(1, 2);

  // Exponent bookkeeping at 2, per unit of f = [N''_v : F_P].
  const long local_degree_F = 4;        // [F_P : Q_2]
  const long top_over_F = 4;            // [N'_v : F_P] / f
  const long ord_disc_F = 4;            // d_{F_P} = 4^2
  const long ord_rel_disc = 3;          // d_{N'_v / F_P} = 2^{3f}
  const long from_base = ord_disc_F * top_over_F;
  const long from_norm = ord_rel_disc * local_degree_F;
  mpq_class a2(from_base + from_norm, local_degree_F * top_over_F);
  a2.canonicalize();
  exps[2] = a2;
  out.push_back(check("a_2_is_7_over_4", a2 == mpq_class(7, 4),
                      std::to_string(from_base) + "f + " + std::to_string(from_norm) + "f over " +
                          std::to_string(local_degree_F * top_over_F) + "f = " + a2.get_str()));

  mpz_class radicand = 1;
  bool halves = true;
  for (const auto& [p, a] : exps) {
    if (p == 2) continue;
    halves = halves && a == mpq_class(1, 2);
    radicand *= p;
  }
  out.push_back(check("odd_part_is_sqrt_273", halves && radicand == 273,
                      "prod_{p in {3,7,13}} p^(1/2) = sqrt(" + radicand.get_str() + ")"));

  // (2^(7/4) sqrt 273)^4 = 2^7 * 273^2
  mpz_class fourth = (mpz_class(1) << 7) * radicand * radicand;
  out.push_back(check("fourth_power", fourth == 9539712, "D^4 = 2^7 * 273^2 = " + fourth.get_str()));

  const std::string decimal = render_root_discriminant(a2, radicand, 4);
  out.push_back(check("decimal_rendering", !decimal.empty(), "2^(7/4) * sqrt(273) = " + decimal));

  const mpq_class cyclo = cyclotomic_two_power_root_disc_exponent(9);
  const mpz_class cyclo_value = mpz_class(1) << static_cast<unsigned>(cyclo.get_num().get_ui());
  out.push_back(check("cyclotomic_comparison", cyclo.get_den() == 1 && cyclo_value == 256,
                      "root discriminant of Q(zeta_512) = 2^" + cyclo.get_str() + " = " + cyclo_value.get_str()));

  if (a_p) *a_p = exps;
  if (value) *value = RootDiscriminant{a2, radicand, decimal};
  return out;
}

NPrimeCertificate build_nprime_certificate() {
  NPrimeCertificate cert;
  cert.nu_values = {nprime_nu(1, 1), nprime_nu(1, 2), nprime_nu(2, 1), nprime_nu(2, 2)};
  cert.C_set = {rational(7), rational(13), rational(-1), nprime_gamma()};
  for (const auto& nu : cert.nu_values) cert.C_set.push_back(nu);
  cert.eps7 = nprime_eps7();
  cert.eps13 = nprime_eps13();
  cert.eps91 = nprime_eps91();
  cert.nu = nprime_nu_unit();
  cert.gamma = nprime_gamma();
  cert.assumed_inputs = {
      "class numbers h(Q(sqrt 7)) = 1, h(Q(sqrt 13)) = 1, h(Q(sqrt 91)) = 2",
      "N'/Q is unramified outside 2, 3, 7, 13 and infinity",
      "N'_v(p)/Q_p is tamely ramified of index 2 for p in {3, 7, 13}",
      "N''_v''(2)/F_P is unramified; N'_v(2)/N''_v''(2) is Klein four with conductor 2",
  };

  const std::array<std::function<std::vector<NamedCheck>()>, 5> stages = {
      verify_nu_norm, verify_units, verify_herglotz, verify_local_integrality, verify_degree_256};
  for (const auto& stage : stages) {
    for (auto& c : stage()) cert.checks.push_back(std::move(c));
  }
  for (auto& c : verify_root_discriminant(&cert.a_p, &cert.root_disc)) cert.checks.push_back(std::move(c));
  return cert;
}

}  // namespace cft
