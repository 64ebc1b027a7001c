#include <doctest.h>

#include <set>

#include "qscl/keystore.hpp"
#include "qscl/protocol.hpp"
#include "support.hpp"

using namespace qscl;
using qscl::test::ints;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qscl::Error");
  return Errc::BadFormat;
}

std::vector<std::uint8_t> elem_bytes(std::span<const std::uint32_t> elems) {
  return std::vector<std::uint8_t>(elems.begin(), elems.end());
}

}  // namespace

TEST_CASE("setup") {
  SUBCASE("toy profile is reproducible and P_pub = d^T A") {
    auto r1 = Rng::seeded(42);
    auto r2 = Rng::seeded(42);
    const auto [p1, s1] = setup(Profile::Toy, r1);
    const auto [p2, s2] = setup(Profile::Toy, r2);
    CHECK(p1 == p2);
    CHECK(s1.d == s2.d);
    CHECK(p1.q().value() == 7);
    CHECK(p1.m() == 5);
    CHECK(p1.n() == 3);
    CHECK(p1.l() == 9);
    CHECK(p1.p_pub == row_mul(s1.d, p1.a));
    CHECK(ints(p1.p_pub) == test::naive_row_mul(ints(s1.d), ints(p1.a), 7));
  }
  SUBCASE("paper profile dimensions") {
    auto rng = Rng::seeded(1);
    const auto [params, secret] = setup(Profile::Paper123, rng);
    CHECK(params.q().value() == 101);
    CHECK(params.a.rows() == 666);
    CHECK(params.a.cols() == 100);
    CHECK(params.a.elements().size() == 66600);
    CHECK(secret.d.size() == 666);
    CHECK(params.m() * params.q().bits() == 4662);
    CHECK(params.n() * params.q().bits() == 700);
  }
  SUBCASE("zero master secret gives a zero public key") {
    auto rng = Rng::seeded(3);
    const auto [params, secret] = setup_with_secret(Profile::Toy, rng, ZqVec::zeros(Modulus(7), 5));
    CHECK(params.p_pub.is_zero());
    CHECK(secret.d.is_zero());
  }
  SUBCASE("profile names") {
    CHECK(parse_profile("paper123") == Profile::Paper123);
    CHECK(parse_profile("toy") == Profile::Toy);
    CHECK_FALSE(parse_profile("huge").has_value());
  }
}

TEST_CASE("params serialization") {
  auto rng = Rng::seeded(5);
  const auto [params, secret] = setup(Profile::Toy, rng);
  const auto blob = serialize_params(params);
  // magic(4) version(1) q(2) m(4) n(4) l(4) name(1+8) A(15) P_pub(3)
  CHECK(blob.size() == 4 + 1 + 2 + 4 + 4 + 4 + 9 + 15 + 3);
  CHECK(blob[0] == 'Q');
  CHECK(blob[4] == 1);
  CHECK(blob[5] == 0);
  CHECK(blob[6] == 7);
  CHECK(deserialize_params(blob) == params);

  auto truncated = blob;
  truncated.pop_back();
  CHECK(code_of([&] { (void)deserialize_params(truncated); }) == Errc::TruncatedMessage);
  auto trailing = blob;
  trailing.push_back(0);
  CHECK(code_of([&] { (void)deserialize_params(trailing); }) == Errc::TrailingBytes);
  auto bad_magic = blob;
  bad_magic[0] = 'X';
  CHECK(code_of([&] { (void)deserialize_params(bad_magic); }) == Errc::BadFormat);
  auto bad_elem = blob;
  bad_elem[4 + 1 + 2 + 4 + 4 + 4 + 9] = 7;  // first element of A
  CHECK(code_of([&] { (void)deserialize_params(bad_elem); }) == Errc::MalformedElement);
}

TEST_CASE("pid_request") {
  auto rng = Rng::seeded(10);
  const auto [params, secret] = setup(Profile::Toy, rng);
  SUBCASE("zero secret") {
    const auto req = pid_request_with(params, ZqVec::zeros(params.q(), params.m()));
    CHECK(req.pk1.is_zero());
  }
  SUBCASE("fixed seed matches the matrix oracle") {
    auto r = Rng::seeded(11);
    const auto req = pid_request(params, r);
    CHECK(ints(req.pk1) == test::naive_row_mul(ints(req.a), ints(params.a), 7));
  }
  SUBCASE("independent calls draw distinct secrets") {
    auto pr = Rng::seeded(12);
    const auto [pp, ps] = setup(Profile::Paper123, pr);
    std::set<std::vector<std::uint32_t>> seen;
    for (int i = 0; i < 100; ++i) {
      const auto req = pid_request(pp, pr);
      seen.emplace(req.a.elements().begin(), req.a.elements().end());
    }
    CHECK(seen.size() == 100);
  }
}

TEST_CASE("pid_issue and trace") {
  auto rng = Rng::seeded(20);
  auto [params, secret] = setup(Profile::Paper123, rng);
  TrustedAuthority ta(params, secret);
  const auto req = pid_request(params, rng);

  SUBCASE("zero identity exposes the mask") {
    const BitString zero(params.l());
    const auto pid = ta.issue_pid(req.pk1, zero, 77);
    CHECK(pid.pid == h1(params.hash, req.pk1, secret.d, 77));
    CHECK(pid.t == 77);
    CHECK(ta.registrations().size() == 1);
  }
  SUBCASE("trace inverts issuance for 100 identities") {
    for (int i = 0; i < 100; ++i) {
      const auto rid = test::random_rid(params.l(), rng);
      const auto pid = ta.issue_pid(req.pk1, rid, static_cast<Timestamp>(i));
      CHECK(ta.trace(pid) == rid);
    }
  }
  SUBCASE("distinct timestamps give distinct pseudonyms") {
    const auto rid = test::random_rid(params.l(), rng);
    std::set<BitString> pids;
    for (Timestamp t = 0; t < 100; ++t) pids.insert(ta.issue_pid(req.pk1, rid, t).pid);
    CHECK(pids.size() == 100);
  }
  SUBCASE("duplicate registration") {
    const auto rid = test::random_rid(params.l(), rng);
    ta.issue_pid(req.pk1, rid, 5);
    CHECK(code_of([&] { ta.issue_pid(req.pk1, rid, 5); }) == Errc::DuplicateRegistration);
  }
  SUBCASE("wrong identity length") {
    CHECK(code_of([&] { ta.issue_pid(req.pk1, BitString(8), 5); }) == Errc::Dimension);
  }
  SUBCASE("unknown pseudonym") {
    const PseudoId stranger{test::random_rid(params.l(), rng), 9};
    CHECK(code_of([&] { (void)ta.trace(stranger); }) == Errc::UnknownPseudonym);
  }
  SUBCASE("a flipped pseudonym bit flips exactly that identity bit") {
    const auto rid = test::random_rid(params.l(), rng);
    const auto pid = ta.issue_pid(req.pk1, rid, 99);
    for (std::size_t bit : {std::size_t{0}, std::size_t{351}, params.l() - 1}) {
      auto tampered = pid;
      tampered.pid.flip_bit(bit);
      const auto traced = ta.unmask(req.pk1, tampered);
      for (std::size_t b = 0; b < params.l(); ++b) CHECK(traced.bit(b) == (rid.bit(b) != (b == bit)));
    }
  }
}

TEST_CASE("psk issuance and validation") {
  auto rng = Rng::seeded(30);
  auto [params, secret] = setup(Profile::Paper123, rng);
  TrustedAuthority ta(params, secret);
  const auto req = pid_request(params, rng);
  const auto pid = ta.issue_pid(req.pk1, test::random_rid(params.l(), rng), 1234);
  const auto partial = ta.issue_psk(req.pk1, pid, rng);

  SUBCASE("soundness identity") {
    const auto gamma = h2(params.hash, add(req.pk1, partial.x), pid.t);
    CHECK(row_mul(partial.psk, params.a) == add(partial.x, scalar_mul(gamma, params.p_pub)));
    CHECK(validate_psk(params, req.pk1, partial, pid));
  }
  SUBCASE("perturbed psk element") {
    std::vector<std::uint32_t> psk(partial.psk.elements().begin(), partial.psk.elements().end());
    psk[17] = (psk[17] + 1) % 101;
    CHECK_FALSE(validate_psk(params, req.pk1, PartialSecretKey{ZqVec(params.q(), psk), partial.x}, pid));
  }
  SUBCASE("perturbed X") {
    std::vector<std::uint32_t> x(partial.x.elements().begin(), partial.x.elements().end());
    x[3] = (x[3] + 1) % 101;
    CHECK_FALSE(validate_psk(params, req.pk1, PartialSecretKey{partial.psk, ZqRowVec(params.q(), x)}, pid));
  }
  SUBCASE("wrong timestamp") {
    CHECK_FALSE(validate_psk(params, req.pk1, partial, PseudoId{pid.pid, pid.t + 1}));
  }
  SUBCASE("unregistered vehicle") {
    const auto other = pid_request(params, rng);
    CHECK(code_of([&] { (void)ta.issue_psk(other.pk1, pid, rng); }) == Errc::UnregisteredVehicle);
    const PseudoId stranger{test::random_rid(params.l(), rng), 1};
    CHECK(code_of([&] { (void)ta.issue_psk(req.pk1, stranger, rng); }) == Errc::UnregisteredVehicle);
  }
}

TEST_CASE("zero master secret: psk equals the TA nonce") {
  auto rng = Rng::seeded(31);
  auto [params, secret] = setup_with_secret(Profile::Toy, rng, ZqVec::zeros(Modulus(7), 5));
  TrustedAuthority ta(params, secret);
  const auto req = pid_request(params, rng);
  const auto pid = ta.issue_pid(req.pk1, test::random_rid(9, rng), 1);
  const auto x = sample_uniform_vec(5, params.q(), rng);
  CHECK(ta.issue_psk_with(req.pk1, pid, x).psk == x);
}

TEST_CASE("toy numeric trace of the whole key lifecycle against the naive oracle") {
  auto rng = Rng::seeded(2025);
  auto [params, secret] = setup(Profile::Toy, rng);
  TrustedAuthority ta(params, secret);
  const auto a_mat = ints(params.a);
  constexpr std::int64_t q = 7;

  const auto req = pid_request(params, rng);
  CHECK(ints(req.pk1) == test::naive_row_mul(ints(req.a), a_mat, q));

  const auto rid = BitString::from_hex(9, "a580");
  const auto pid = ta.issue_pid(req.pk1, rid, 500);
  CHECK(pid.pid == (rid ^ h1(params.hash, req.pk1, secret.d, 500)));

  const ZqVec x(params.q(), {3, 0, 6, 1, 5});
  const auto partial = ta.issue_psk_with(req.pk1, pid, x);
  const auto x_row = test::naive_row_mul(ints(x), a_mat, q);
  CHECK(ints(partial.x) == x_row);
  const auto pk_ints = test::naive_add(ints(req.pk1), x_row, q);
  const auto gamma = static_cast<std::int64_t>(
      h2(params.hash, ZqRowVec(params.q(), std::vector<std::uint32_t>(pk_ints.begin(), pk_ints.end())), 500));
  CHECK(ints(partial.psk) == test::naive_add(ints(x), test::naive_scale(gamma, ints(secret.d), q), q));

  const auto cred = derive_keys(params, req.a, req.pk1, partial, pid);
  CHECK(ints(cred.sk) == test::naive_add(ints(partial.psk), ints(req.a), q));
  CHECK(ints(cred.pk) == test::naive_add(ints(req.pk1), x_row, q));
  // sk^T A == pk + gamma * P_pub, all in plain integers.
  CHECK(test::naive_row_mul(ints(cred.sk), a_mat, q) ==
        test::naive_add(ints(cred.pk), test::naive_scale(gamma, ints(params.p_pub), q), q));
  CHECK(credential_consistent(params, cred));
}

TEST_CASE("derive_keys") {
  auto rng = Rng::seeded(40);
  auto [params, secret] = setup(Profile::Toy, rng);
  TrustedAuthority ta(params, secret);

  SUBCASE("zero self-secret") {
    const auto req = pid_request_with(params, ZqVec::zeros(params.q(), params.m()));
    const auto pid = ta.issue_pid(req.pk1, test::random_rid(9, rng), 3);
    const auto partial = ta.issue_psk(req.pk1, pid, rng);
    const auto cred = derive_keys(params, req.a, req.pk1, partial, pid);
    CHECK(cred.sk == partial.psk);
    CHECK(req.pk1.is_zero());
    CHECK(cred.pk == partial.x);
  }
  SUBCASE("invalid partial key") {
    const auto req = pid_request(params, rng);
    const auto pid = ta.issue_pid(req.pk1, test::random_rid(9, rng), 3);
    auto partial = ta.issue_psk(req.pk1, pid, rng);
    std::vector<std::uint32_t> psk(partial.psk.elements().begin(), partial.psk.elements().end());
    psk[0] = (psk[0] + 1) % 7;
    partial.psk = ZqVec(params.q(), psk);
    CHECK(code_of([&] { (void)derive_keys(params, req.a, req.pk1, partial, pid); }) == Errc::InvalidPartialKey);
  }
  SUBCASE("credential identity over many seeds") {
    for (int i = 0; i < 50; ++i) {
      const auto req = pid_request(params, rng);
      const auto pid = ta.issue_pid(req.pk1, test::random_rid(9, rng), static_cast<Timestamp>(100 + i));
      const auto partial = ta.issue_psk(req.pk1, pid, rng);
      CHECK(credential_consistent(params, derive_keys(params, req.a, req.pk1, partial, pid)));
    }
  }
}

TEST_CASE("TA state restore") {
  auto rng = Rng::seeded(50);
  auto [params, secret] = setup(Profile::Toy, rng);
  TrustedAuthority ta(params, secret);
  const auto req = pid_request(params, rng);
  const auto rid = test::random_rid(9, rng);
  const auto pid = ta.issue_pid(req.pk1, rid, 8);

  TrustedAuthority restored(params, secret, {ta.registrations().begin(), ta.registrations().end()});
  CHECK(restored.trace(pid) == rid);

  auto wrong = secret;
  wrong.d = add(secret.d, ZqVec(params.q(), {1, 0, 0, 0, 0}));
  CHECK_THROWS_AS(TrustedAuthority(params, wrong), Error);
}

TEST_CASE("key escrow separation and master key confinement") {
  auto rng = Rng::seeded(60);
  auto fleet = test::make_fleet(Profile::Paper123, 3, rng);
  const auto& params = fleet.params;

  const auto ta_bytes = serialize_store(KeyStore{
      params, TaStore{fleet.ta.master_secret(), {fleet.ta.registrations().begin(), fleet.ta.registrations().end()}}});
  const auto d_bytes = elem_bytes(fleet.ta.master_secret().d.elements());
  CHECK(std::search(ta_bytes.begin(), ta_bytes.end(), d_bytes.begin(), d_bytes.end()) != ta_bytes.end());

  for (const auto& cred : fleet.creds) {
    const auto sk = elem_bytes(cred.sk.elements());
    const auto a = elem_bytes(cred.a.elements());
    CHECK(std::search(ta_bytes.begin(), ta_bytes.end(), sk.begin(), sk.end()) == ta_bytes.end());
    CHECK(std::search(ta_bytes.begin(), ta_bytes.end(), a.begin(), a.end()) == ta_bytes.end());

    const std::vector<std::vector<std::uint8_t>> vehicle_visible{
        serialize_store(KeyStore{params, cred}),
        serialize_store(KeyStore{params, PendingRegistration{cred.pid, PidRequest{cred.a, cred.pk1}}}),
        serialize_store(KeyStore{params, PartialKeyDelivery{cred.pid, cred.partial}}),
        serialize_store(KeyStore{params, PublicKeyAnnouncement{cred.pid, cred.pk}}),
        serialize_params(params),
    };
    for (const auto& blob : vehicle_visible) {
      CHECK(std::search(blob.begin(), blob.end(), d_bytes.begin(), d_bytes.end()) == blob.end());
    }
  }
}
