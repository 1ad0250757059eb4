#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "wsnsim/sim_core.hpp"
#include "wsnsim/time.hpp"

namespace wsnsim {

inline constexpr NodeId kBroadcast = -2;
inline constexpr NodeId kNoNode = -3;

using SeqNo = std::uint32_t;
using PacketId = std::uint64_t;

/// Application payload carried hop by hop.
struct DataPacket {
  PacketId id = 0;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SimTime created_at;
  std::uint32_t payload_bits = 0;
  std::uint32_t hops = 0;
};

struct RreqId {
  NodeId origin = kNoNode;
  std::uint32_t broadcast_id = 0;
  auto operator<=>(const RreqId&) const = default;
};

struct RreqPacket {
  RreqId id;
  NodeId destination = kNoNode;
  SeqNo origin_seq = 0;
  SeqNo dest_seq_known = 0;
  std::uint32_t hop_count = 0;
  NodeId first_hop = kNoNode;  // first hop after the origin; unset while hop_count == 0
};

struct RrepPacket {
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SeqNo dest_seq = 0;
  std::uint32_t hop_count = 0;
  NodeId last_hop = kNoNode;  // neighbour of the destination; unset while hop_count == 0
};

struct UnreachableDest {
  NodeId destination = kNoNode;
  SeqNo seq = 0;
};

struct RerrPacket {
  std::vector<UnreachableDest> unreachable;
};

struct DsrRreq {
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  std::uint32_t request_id = 0;
  std::vector<NodeId> hops;  // origin first
};

struct DsrRrep {
  std::vector<NodeId> route;  // origin .. destination
};

struct DsrRerr {
  std::vector<NodeId> back_route;  // reporting node .. origin
  NodeId broken_from = kNoNode;
  NodeId broken_to = kNoNode;
};

struct DsrData {
  DataPacket packet;
  std::vector<NodeId> route;
  std::size_t index = 0;  // position of the current holder in route
};

struct Beacon {};

using RoutingPayload = std::variant<std::monostate, DataPacket, RreqPacket, RrepPacket, RerrPacket, DsrRreq,
                                    DsrRrep, DsrRerr, DsrData, Beacon>;

enum class FrameKind : std::uint8_t { kWakeup, kData, kRreq, kRrep, kRerr, kHello };
inline constexpr int kFrameKindCount = 6;

const char* to_string(FrameKind kind);

/// A link-layer frame. WAKEUP frames carry the I-SLOT the receiver must wake for.
struct Frame {
  FrameKind kind = FrameKind::kData;
  NodeId src = kNoNode;
  NodeId dst = kBroadcast;
  std::int32_t islot_index = -1;
  std::uint32_t payload_bits = 0;
  RoutingPayload payload;
};

/// On-air sizes used for the non-data frames (bits, headers included).
struct FrameSizes {
  static constexpr std::uint32_t kDataHeader = 128;
  static constexpr std::uint32_t kRreq = 256;
  static constexpr std::uint32_t kRrep = 224;
  static constexpr std::uint32_t kRerrBase = 96;
  static constexpr std::uint32_t kRerrPerDest = 64;
  static constexpr std::uint32_t kDsrPerHop = 32;
  static constexpr std::uint32_t kHello = 128;
  static constexpr std::uint32_t kBeacon = 64;
};

}  // namespace wsnsim
