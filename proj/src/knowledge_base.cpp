#include "qgr/knowledge_base.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "qgr/errors.hpp"

namespace qgr {

std::uint64_t fingerprint_bytes(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t topology_fingerprint(const Topology& topology) {
  return fingerprint_bytes(topology.serialize());
}

namespace {

using Key = std::tuple<std::uint64_t, int, int>;

Key key_of(const KnowledgeEntry& e) {
  return {e.topology_fingerprint, e.source, e.dest};
}

std::string render(const KnowledgeEntry& e) {
  std::ostringstream out;
  out << "kb " << std::hex << e.topology_fingerprint << std::dec << ' '
      << e.source << ' ' << e.dest << ' ' << format_double(e.raw_bandwidth)
      << ' ' << format_double(e.mean_grade) << ' ' << e.recorded_at << ' ';
  for (std::size_t i = 0; i < e.best_path.size(); ++i) {
    if (i) out << '-';
    out << e.best_path[i];
  }
  out << '\n';
  return out.str();
}

void write_store(const std::map<Key, KnowledgeEntry>& entries,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write knowledge base", path);
  for (const auto& [key, e] : entries) out << render(e);
  if (!out) throw IoError("write failed", path);
}

}  // namespace

std::vector<KnowledgeEntry> kb_load(const std::string& store_path) {
  std::ifstream in(store_path);
  if (!in) return {};  // absent store = empty
  std::vector<KnowledgeEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag, path_field;
    KnowledgeEntry e;
    if (!(ls >> tag >> std::hex >> e.topology_fingerprint >> std::dec >>
          e.source >> e.dest >> e.raw_bandwidth >> e.mean_grade >>
          e.recorded_at >> path_field) ||
        tag != "kb") {
      throw ParseError("corrupt knowledge base record", line_no);
    }
    std::istringstream ps(path_field);
    std::string part;
    while (std::getline(ps, part, '-')) {
      try {
        e.best_path.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw ParseError("corrupt path field in knowledge base record",
                         line_no);
      }
    }
    if (e.best_path.size() < 2 || e.best_path.front() != e.source ||
        e.best_path.back() != e.dest) {
      throw ParseError("knowledge base path does not match its endpoints",
                       line_no);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void kb_record(const KnowledgeEntry& entry, const std::string& store_path) {
  if (entry.best_path.size() < 2 || entry.best_path.front() != entry.source ||
      entry.best_path.back() != entry.dest) {
    throw Error("knowledge entry path must run source to dest");
  }
  std::map<Key, KnowledgeEntry> entries;
  std::uint64_t max_counter = 0;
  for (KnowledgeEntry& e : kb_load(store_path)) {
    max_counter = std::max(max_counter, e.recorded_at);
    entries[key_of(e)] = std::move(e);
  }
  auto it = entries.find(key_of(entry));
  if (it != entries.end() && it->second.raw_bandwidth >= entry.raw_bandwidth) {
    return;  // existing route is at least as good; store untouched
  }
  KnowledgeEntry stored = entry;
  stored.recorded_at = max_counter + 1;
  entries[key_of(stored)] = std::move(stored);
  write_store(entries, store_path);
}

std::optional<KnowledgeEntry> kb_lookup(std::uint64_t fingerprint, int source,
                                        int dest,
                                        const std::string& store_path) {
  for (const KnowledgeEntry& e : kb_load(store_path)) {
    if (e.topology_fingerprint == fingerprint && e.source == source &&
        e.dest == dest) {
      return e;
    }
  }
  return std::nullopt;
}

}  // namespace qgr
