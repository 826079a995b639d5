#include <doctest.h>

#include "cftower/nprime.hpp"
#include "cftower/quad_field.hpp"

using namespace cft;

namespace {

void require_all(const std::vector<NamedCheck>& checks) {
  REQUIRE_FALSE(checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.witness);
    CHECK(c.passed);
    CHECK_FALSE(c.witness.empty());
  }
}

}  // namespace

TEST_CASE("nu values") {
  CHECK(nprime_nu(1, 1) == BiquadElem(7, 13, {-13, -5, 8, 3}));
  CHECK(nprime_nu(2, 2) == BiquadElem(7, 13, {-13, 5, -8, 3}));
  CHECK(nprime_nu(1, 1).norm() == -3);
  CHECK(nprime_nu(1, 1) * nprime_nu(1, 2) * nprime_nu(2, 1) * nprime_nu(2, 2) == BiquadElem::integer(7, 13, -3));
  CHECK(nprime_nu(1, 1).galois(-1, 1) == nprime_nu(2, 1));
  CHECK_THROWS(nprime_nu(0, 1));
  require_all(verify_nu_norm());
}

TEST_CASE("unit relations") {
  CHECK(QuadInt(91, 1574, 165).norm() == 1);
  CHECK(nprime_nu_unit() * nprime_nu_unit() == nprime_eps91() * nprime_eps7());
  CHECK(BiquadElem::from_quad(7, 13, fundamental_unit(13).unit) == nprime_eps13());
  require_all(verify_units());
}

TEST_CASE("class number formula") {
  CHECK(herglotz_class_number(2, 1, 1, 2) == 1);
  CHECK(herglotz_class_number(4, 1, 1, 2) == 2);
  require_all(verify_herglotz());
}

TEST_CASE("local integrality") {
  const BiquadElem pi(7, 13, {3, 1, 0, 0});
  CHECK(BiquadElem::integer(7, 13, 2) / pi == BiquadElem(7, 13, {3, -1, 0, 0}));
  const BiquadElem beta = (BiquadElem::integer(7, 13, 1) - nprime_nu(1, 1)) / (pi * pi);
  CHECK(is_integral(beta));
  const BiquadElem tr = BiquadElem::integer(7, 13, 2) / pi;
  CHECK((tr * tr - BiquadElem::integer(7, 13, 4) * beta) * pi * pi == BiquadElem::integer(7, 13, 4) * nprime_nu(1, 1));
  require_all(verify_local_integrality());
}

TEST_CASE("Kummer independence gives degree 256") { require_all(verify_degree_256()); }

TEST_CASE("root discriminant") {
  std::map<u64, mpq_class> a_p;
  RootDiscriminant value;
  require_all(verify_root_discriminant(&a_p, &value));
  CHECK(a_p.at(2) == mpq_class(7, 4));
  CHECK(a_p.at(3) == mpq_class(1, 2));
  CHECK(a_p.at(7) == mpq_class(1, 2));
  CHECK(a_p.at(13) == mpq_class(1, 2));
  CHECK(value.two_exponent == mpq_class(7, 4));
  CHECK(value.radicand == 273);
  CHECK(value.decimal == "55.5756");
  CHECK(render_root_discriminant(mpq_class(0), 4, 2) == "2.00");
  CHECK(cyclotomic_two_power_root_disc_exponent(9) == 8);
  CHECK(cyclotomic_two_power_root_disc_exponent(3) == 2);  // Q(i, sqrt 2): disc 256, degree 4
}

TEST_CASE("full certificate") {
  const NPrimeCertificate cert = build_nprime_certificate();
  CHECK(cert.passed());
  CHECK(cert.C_set.size() == 8);
  CHECK(cert.root_disc.decimal == "55.5756");
  CHECK(cert.nu == nprime_nu_unit());
  CHECK_FALSE(cert.assumed_inputs.empty());
  CHECK(build_nprime_certificate().checks == cert.checks);
}
