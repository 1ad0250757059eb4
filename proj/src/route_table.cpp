#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "wsnsim/routing.hpp"

namespace wsnsim {

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::kNoRoute: return "no_route";
    case DropReason::kLinkBreak: return "link_break";
    case DropReason::kNodeDown: return "node_down";
    case DropReason::kNotOnRoute: return "not_on_route";
  }
  return "?";
}

std::optional<NodeId> select_route(std::span<const RouteCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  const auto best = std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.ad, a.hop_count, a.energy_cost, a.next_hop) <
           std::tie(b.ad, b.hop_count, b.energy_cost, b.next_hop);
  });
  return best->next_hop;
}

std::uint32_t RouteEntry::max_hop_count() const {
  std::uint32_t m = 0;
  for (const auto& p : paths) m = std::max(m, p.hop_count);
  return m;
}

bool RouteTable::insert_path(NodeId destination, SeqNo seq, NodeId next_hop, NodeId last_hop,
                             std::uint32_t hop_count, Picojoules energy_cost, SimTime expiry) {
  if (hop_count < 1) throw std::logic_error("path hop count must be >= 1");
  if (destination == self_ || next_hop == self_) return false;
  const PathRecord path{next_hop, last_hop, hop_count, energy_cost};

  auto it = entries_.find(destination);
  if (it == entries_.end()) {
    RouteEntry e;
    e.destination = destination;
    e.seq = seq;
    e.paths.push_back(path);
    e.expiry = expiry;
    entries_.emplace(destination, std::move(e));
    return true;
  }
  RouteEntry& e = it->second;
  if (seq > e.seq) {
    e.seq = seq;
    e.advertised_hop_count.reset();
    e.paths.assign(1, path);
    e.expiry = expiry;
    return true;
  }
  if (seq < e.seq) return false;

  if (e.advertised_hop_count && hop_count >= *e.advertised_hop_count) return false;
  for (const auto& p : e.paths)
    if (p.next_hop == next_hop || p.last_hop == last_hop) return false;
  e.paths.push_back(path);
  e.expiry = std::max(e.expiry, expiry);
  return true;
}

std::uint32_t RouteTable::advertise(NodeId destination) {
  RouteEntry* e = find(destination);
  if (e == nullptr) throw std::logic_error("advertising an unknown destination");
  if (!e->advertised_hop_count) {
    if (e->paths.empty()) throw std::logic_error("advertising a route without paths");
    e->advertised_hop_count = e->max_hop_count();
  }
  return *e->advertised_hop_count;
}

std::vector<RouteTable::Invalidated> RouteTable::remove_next_hop(NodeId next_hop,
                                                                 const std::map<NodeId, SeqNo>* only, bool bump_seq,
                                                                 std::vector<NodeId>* touched) {
  std::vector<Invalidated> out;
  for (auto& [dest, e] : entries_) {
    std::optional<SeqNo> reported;
    if (only != nullptr) {
      auto f = only->find(dest);
      if (f == only->end()) continue;
      reported = f->second;
    }
    const auto before = e.paths.size();
    std::erase_if(e.paths, [&](const PathRecord& p) { return p.next_hop == next_hop; });
    if (e.paths.size() == before) continue;
    if (touched != nullptr) touched->push_back(dest);
    if (!e.paths.empty()) continue;
    const SeqNo old = e.seq;
    if (bump_seq) {
      e.seq = e.seq + 1;
    } else if (reported) {
      e.seq = std::max(e.seq, *reported);
    }
    if (e.seq != old) e.advertised_hop_count.reset();
    out.push_back({dest, e.seq, e.precursors});
    e.precursors.clear();
  }
  return out;
}

std::vector<NodeId> RouteTable::purge_expired(SimTime now) {
  std::vector<NodeId> out;
  for (auto& [dest, e] : entries_) {
    if (!e.paths.empty() && e.expiry <= now) {
      e.paths.clear();
      out.push_back(dest);
    }
  }
  return out;
}

RouteEntry* RouteTable::find(NodeId destination) {
  auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

const RouteEntry* RouteTable::find(NodeId destination) const {
  auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

bool has_next_hop_cycle(const std::vector<const RouteTable*>& tables, NodeId destination) {
  const std::size_t n = tables.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RouteEntry* e = tables[i] ? tables[i]->find(destination) : nullptr;
    if (e == nullptr) continue;
    for (const auto& p : e->paths)
      if (p.next_hop >= 0 && static_cast<std::size_t>(p.next_hop) < n) out[i].push_back(static_cast<std::size_t>(p.next_hop));
  }
  // 0 white, 1 on stack, 2 done
  std::vector<int> color(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < out[v].size()) {
        const std::size_t w = out[v][idx++];
        if (color[w] == 1) return true;
        if (color[w] == 0) {
          color[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

bool paths_disjoint(const RouteEntry& entry) {
  for (std::size_t i = 0; i < entry.paths.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (entry.paths[i].next_hop == entry.paths[j].next_hop || entry.paths[i].last_hop == entry.paths[j].last_hop)
        return false;
  return true;
}

}  // namespace wsnsim
