#include "hwsnkey/ledger.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hwsnkey {

std::string_view to_string(KeyMethod method) {
  switch (method) {
    case KeyMethod::Poly:
      return "poly";
    case KeyMethod::PrfCase1:
      return "prf-case1";
    case KeyMethod::PrfCase2:
      return "prf-case2";
    case KeyMethod::BsCase3:
      return "bs-case3";
    case KeyMethod::Baseline:
      return "baseline";
  }
  return "unknown";
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Hello:
      return "hello";
    case MessageKind::IdExchange:
      return "id-exchange";
    case MessageKind::Notify:
      return "notify";
    case MessageKind::Case3Hello:
      return "case3-hello";
    case MessageKind::Case3Request:
      return "case3-request";
    case MessageKind::Case3Response:
      return "case3-response";
  }
  return "unknown";
}

std::uint64_t LinkLedger::pair_key(NodeId u, NodeId v) {
  const auto lo = std::min(u.value, v.value);
  const auto hi = std::max(u.value, v.value);
  return (lo << 32) | hi;
}

const LinkRecord* LinkLedger::find(NodeId u, NodeId v) const {
  auto it = links_.find(pair_key(u, v));
  return it == links_.end() ? nullptr : &it->second;
}

bool LinkLedger::insert(NodeId u, const PairwiseKey& key_u, NodeId v,
                        const PairwiseKey& key_v, KeyMethod method, NodeId prf_keyholder) {
  if (u == v) throw std::invalid_argument("a node cannot key with itself");
  LinkRecord rec;
  rec.method = method;
  rec.prf_keyholder = prf_keyholder;
  if (u < v) {
    rec.low = u;
    rec.high = v;
    rec.key_at_low = key_u;
    rec.key_at_high = key_v;
  } else {
    rec.low = v;
    rec.high = u;
    rec.key_at_low = key_v;
    rec.key_at_high = key_u;
  }
  return links_.try_emplace(pair_key(u, v), rec).second;
}

std::size_t LinkLedger::erase_incident(NodeId id) {
  return std::erase_if(links_, [id](const auto& kv) { return kv.second.involves(id); });
}

std::vector<LinkRecord> LinkLedger::sorted() const {
  std::vector<LinkRecord> out;
  out.reserve(links_.size());
  for (const auto& [k, rec] : links_) out.push_back(rec);
  std::sort(out.begin(), out.end(), [](const LinkRecord& a, const LinkRecord& b) {
    return std::pair{a.low, a.high} < std::pair{b.low, b.high};
  });
  return out;
}

std::string LinkLedger::to_csv() const {
  std::ostringstream out;
  out << "u,v,method\n";
  for (const auto& rec : sorted()) {
    out << rec.low.value << ',' << rec.high.value << ',' << to_string(rec.method) << '\n';
  }
  return out.str();
}

NodeCounters& Traffic::at(NodeId id) {
  if (id.value >= by_id_.size()) by_id_.resize(id.value + 1);
  return by_id_[id.value];
}

NodeCounters Traffic::counters(NodeId id) const {
  return id.value < by_id_.size() ? by_id_[id.value] : NodeCounters{};
}

void Traffic::broadcast(MessageKind kind, NodeId from) {
  at(from).msgs_sent++;
  if (log_enabled_) log_.push_back({kind, from, NodeId{}});
}

void Traffic::send(MessageKind kind, NodeId from, NodeId to) {
  at(from).msgs_sent++;
  at(to).msgs_received++;
  if (log_enabled_) log_.push_back({kind, from, to});
}

std::string Traffic::to_csv() const {
  std::ostringstream out;
  out << "node,msgs_sent,msgs_received,prf_evals,poly_evals\n";
  for (std::size_t id = 1; id < by_id_.size(); ++id) {
    const auto& c = by_id_[id];
    if (c == NodeCounters{}) continue;
    out << id << ',' << c.msgs_sent << ',' << c.msgs_received << ',' << c.prf_evals << ','
        << c.poly_evals << '\n';
  }
  return out.str();
}

}  // namespace hwsnkey
