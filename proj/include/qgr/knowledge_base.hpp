#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgr/topology.hpp"

namespace qgr {

/// One remembered route: the best path found so far for a
/// (topology, source, dest) query.
struct KnowledgeEntry {
  std::uint64_t topology_fingerprint = 0;
  int source = 0;
  int dest = 0;
  std::vector<int> best_path;
  double raw_bandwidth = 0;
  double mean_grade = 0;
  std::uint64_t recorded_at = 0;  // monotone run counter, store-assigned

  bool operator==(const KnowledgeEntry&) const = default;
};

/// FNV-1a over a byte string.
std::uint64_t fingerprint_bytes(std::string_view bytes);

/// Content hash of the topology's canonical file form.
std::uint64_t topology_fingerprint(const Topology& topology);

/// All entries of a store file; an absent file is an empty store.
/// Throws ParseError (with line number) on a corrupt line.
std::vector<KnowledgeEntry> kb_load(const std::string& store_path);

/// Insert or improve: an existing entry for the same (fingerprint, source,
/// dest) is replaced only when the new bandwidth is strictly greater;
/// otherwise the store is left byte-identical.
void kb_record(const KnowledgeEntry& entry, const std::string& store_path);

std::optional<KnowledgeEntry> kb_lookup(std::uint64_t fingerprint, int source,
                                        int dest,
                                        const std::string& store_path);

}  // namespace qgr
