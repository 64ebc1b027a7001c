#include "qscl/keystore.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

namespace qscl {
namespace {

constexpr std::uint8_t kStoreMagic[4] = {'Q', 'S', 'C', 'K'};
constexpr std::uint8_t kStoreVersion = 1;

void write_pid(ByteWriter& w, const PseudoId& pid) { w.bits(pid.pid).u32(pid.t); }

PseudoId read_pid(ByteReader& r, const SystemParams& p) {
  auto bits = r.bits(p.l());
  const auto t = r.u32();
  return PseudoId{std::move(bits), t};
}

ZqVec read_vec(ByteReader& r, const SystemParams& p) { return ZqVec(p.q(), r.elements(p.m(), p.q())); }
ZqRowVec read_row(ByteReader& r, const SystemParams& p) { return ZqRowVec(p.q(), r.elements(p.n(), p.q())); }

struct BodyWriter {
  ByteWriter& w;
  const SystemParams& p;

  void vec(const ZqVec& v) const { w.elements(v.elements(), p.q()); }
  void row(const ZqRowVec& v) const { w.elements(v.elements(), p.q()); }

  void operator()(const std::monostate&) const {}
  void operator()(const TaStore& ta) const {
    vec(ta.secret.d);
    w.u32(static_cast<std::uint32_t>(ta.records.size()));
    for (const auto& rec : ta.records) {
      row(rec.pk1);
      write_pid(w, rec.pid);
      w.bits(rec.rid);
    }
  }
  void operator()(const VehicleCredential& c) const {
    write_pid(w, c.pid);
    vec(c.a);
    row(c.pk1);
    vec(c.partial.psk);
    row(c.partial.x);
    vec(c.sk);
    row(c.pk);
  }
  void operator()(const PendingRegistration& pr) const {
    write_pid(w, pr.pid);
    vec(pr.request.a);
    row(pr.request.pk1);
  }
  void operator()(const PartialKeyDelivery& d) const {
    write_pid(w, d.pid);
    vec(d.partial.psk);
    row(d.partial.x);
  }
  void operator()(const PublicKeyAnnouncement& a) const {
    write_pid(w, a.pid);
    row(a.pk);
  }
};

}  // namespace

std::vector<std::uint8_t> serialize_store(const KeyStore& store) {
  ByteWriter w;
  w.raw(kStoreMagic).u8(kStoreVersion).u8(static_cast<std::uint8_t>(store.kind()));
  w.raw(serialize_params(store.params));
  std::visit(BodyWriter{w, store.params}, store.body);
  return w.take();
}

KeyStore deserialize_store(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kStoreMagic)) throw Error(Errc::BadFormat, "not a key store");
  if (const auto v = r.u8(); v != kStoreVersion) {
    throw Error(Errc::BadFormat, "unsupported key store version " + std::to_string(v));
  }
  const auto kind = r.u8();
  auto params = read_params(r);
  const auto& p = params;

  StoreBody body;
  switch (static_cast<StoreKind>(kind)) {
    case StoreKind::ParamsOnly: break;
    case StoreKind::TrustedAuthority: {
      TaStore ta{MasterSecret{read_vec(r, p)}, {}};
      const auto count = r.u32();
      for (std::uint32_t i = 0; i < count; ++i) {
        auto pk1 = read_row(r, p);
        auto pid = read_pid(r, p);
        auto rid = r.bits(p.l());
        ta.records.push_back(RegistrationRecord{std::move(pk1), std::move(pid), std::move(rid)});
      }
      body = std::move(ta);
      break;
    }
    case StoreKind::Vehicle: {
      auto pid = read_pid(r, p);
      auto a = read_vec(r, p);
      auto pk1 = read_row(r, p);
      auto psk = read_vec(r, p);
      auto x = read_row(r, p);
      auto sk = read_vec(r, p);
      auto pk = read_row(r, p);
      body = VehicleCredential{std::move(pid), std::move(a), std::move(pk1), PartialSecretKey{std::move(psk), std::move(x)},
                               std::move(sk), std::move(pk)};
      break;
    }
    case StoreKind::PendingRegistration: {
      auto pid = read_pid(r, p);
      auto a = read_vec(r, p);
      auto pk1 = read_row(r, p);
      body = PendingRegistration{std::move(pid), PidRequest{std::move(a), std::move(pk1)}};
      break;
    }
    case StoreKind::PartialKey: {
      auto pid = read_pid(r, p);
      auto psk = read_vec(r, p);
      auto x = read_row(r, p);
      body = PartialKeyDelivery{std::move(pid), PartialSecretKey{std::move(psk), std::move(x)}};
      break;
    }
    case StoreKind::PublicKey: {
      auto pid = read_pid(r, p);
      auto pk = read_row(r, p);
      body = PublicKeyAnnouncement{std::move(pid), std::move(pk)};
      break;
    }
    default: throw Error(Errc::BadFormat, "unknown key store kind " + std::to_string(kind));
  }
  r.expect_end();
  return KeyStore{std::move(params), std::move(body)};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qscl
