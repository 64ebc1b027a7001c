#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "qscl/protocol.hpp"

namespace qscl {

// Binary key-store container: "QSCK" | version | kind | params | body.
// Vehicle-side kinds never carry d; the TA kind never carries a vehicle's
// self-chosen secret or full secret key.
enum class StoreKind : std::uint8_t {
  ParamsOnly = 0,
  TrustedAuthority = 1,
  Vehicle = 2,
  PendingRegistration = 3,
  PartialKey = 4,
  PublicKey = 5,
};

struct TaStore {
  MasterSecret secret;
  std::vector<RegistrationRecord> records;
};

// Vehicle state between pseudonym issuance and partial-key delivery.
struct PendingRegistration {
  PseudoId pid;
  PidRequest request;
};

// TA -> vehicle delivery of the partial key over the secure channel.
struct PartialKeyDelivery {
  PseudoId pid;
  PartialSecretKey partial;
};

struct PublicKeyAnnouncement {
  PseudoId pid;
  ZqRowVec pk;
};

using StoreBody = std::variant<std::monostate, TaStore, VehicleCredential, PendingRegistration, PartialKeyDelivery,
                               PublicKeyAnnouncement>;

struct KeyStore {
  SystemParams params;
  StoreBody body;

  StoreKind kind() const noexcept { return static_cast<StoreKind>(body.index()); }
};

std::vector<std::uint8_t> serialize_store(const KeyStore& store);
KeyStore deserialize_store(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace qscl
