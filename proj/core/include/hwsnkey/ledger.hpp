#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwsnkey/types.hpp"

namespace hwsnkey {

enum class KeyMethod : std::uint8_t {
  Poly,      // head-head, polynomial shares
  PrfCase1,  // sensor-sensor, ring hit
  PrfCase2,  // head-sensor, ring hit
  BsCase3,   // base-station mediated, misdeployed endpoint
  Baseline,  // any comparison scheme
};

std::string_view to_string(KeyMethod method);

struct LinkRecord {
  NodeId low;   // smaller id
  NodeId high;  // larger id
  KeyMethod method = KeyMethod::Baseline;
  PairwiseKey key_at_low;   // copy held by `low`
  PairwiseKey key_at_high;  // copy held by `high`
  // PRF links: node whose master key produced the key. Invalid otherwise.
  NodeId prf_keyholder;

  bool agreed() const { return key_at_low == key_at_high; }
  bool involves(NodeId id) const { return low == id || high == id; }
};

// Established pairwise keys, one record per unordered node pair.
class LinkLedger {
 public:
  static std::uint64_t pair_key(NodeId u, NodeId v);

  bool contains(NodeId u, NodeId v) const { return links_.contains(pair_key(u, v)); }
  const LinkRecord* find(NodeId u, NodeId v) const;

  // Stores each endpoint's own copy. Returns false (and changes nothing)
  // when the pair already has a key.
  bool insert(NodeId u, const PairwiseKey& key_u, NodeId v, const PairwiseKey& key_v,
              KeyMethod method, NodeId prf_keyholder = {});

  // Revokes every link touching `id`; returns how many were removed.
  std::size_t erase_incident(NodeId id);

  std::size_t size() const { return links_.size(); }
  void reserve(std::size_t n) { links_.reserve(n); }

  // Records ordered by (low, high).
  std::vector<LinkRecord> sorted() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [k, rec] : links_) f(rec);
  }

  // u,v,method
  std::string to_csv() const;

 private:
  std::unordered_map<std::uint64_t, LinkRecord> links_;
};

struct NodeCounters {
  std::uint64_t msgs_sent = 0;
  std::uint64_t msgs_received = 0;
  std::uint64_t prf_evals = 0;
  std::uint64_t poly_evals = 0;

  bool operator==(const NodeCounters&) const = default;
};

enum class MessageKind : std::uint8_t {
  Hello,          // id broadcast
  IdExchange,     // head-to-head id exchange
  Notify,         // "I hold a key for you"
  Case3Hello,     // id_u, RN_u from the misdeployed node
  Case3Request,   // sealed request hop toward the base station
  Case3Response,  // sealed key copies hop back toward the endpoints
};

std::string_view to_string(MessageKind kind);

struct MessageEvent {
  MessageKind kind;
  NodeId from;
  NodeId to;  // invalid for broadcasts

  bool operator==(const MessageEvent&) const = default;
};

// Per-node overhead counters plus an optional ordered message log.
// Broadcasts count as one sent message; only unicast messages count as
// received.
class Traffic {
 public:
  explicit Traffic(bool log_messages = true) : log_enabled_(log_messages) {}

  void broadcast(MessageKind kind, NodeId from);
  void send(MessageKind kind, NodeId from, NodeId to);
  void count_prf(NodeId id) { at(id).prf_evals++; }
  void count_poly(NodeId id) { at(id).poly_evals++; }

  NodeCounters counters(NodeId id) const;
  const std::vector<MessageEvent>& log() const { return log_; }
  bool log_enabled() const { return log_enabled_; }

  // node,msgs_sent,msgs_received,prf_evals,poly_evals ; one row per id that
  // has any activity, ascending.
  std::string to_csv() const;

 private:
  NodeCounters& at(NodeId id);

  bool log_enabled_;
  std::vector<NodeCounters> by_id_;
  std::vector<MessageEvent> log_;
};

}  // namespace hwsnkey
