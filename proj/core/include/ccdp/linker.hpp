#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccdp/corpus.hpp"
#include "ccdp/ect.hpp"
#include "ccdp/proximity.hpp"
#include "ccdp/semantic.hpp"

namespace ccdp {

/// Message pair from two different ECTs whose global proximity reached the
/// threshold. msg_a precedes msg_b in corpus order.
struct CollaborativeLink {
  std::string msg_a;
  std::string msg_b;
  ProximityBreakdown breakdown;

  friend bool operator==(const CollaborativeLink&, const CollaborativeLink&) = default;
};

/// Collaborative Conversation of Document Production: ECTs joined by links.
struct Ccdp {
  std::string ccdp_id;
  std::vector<std::string> ect_ids;
  std::vector<CollaborativeLink> links;

  friend bool operator==(const Ccdp&, const Ccdp&) = default;
};

struct LinkOptions {
  std::optional<double> horizon_hours;  // skip pairs further apart; unset = unlimited
  unsigned threads = 1;                 // 0 = hardware concurrency
};

/// Scores every unordered cross-ECT pair within the horizon and keeps those
/// with gp >= cfg.threshold, sorted by descending gp, then (msg_a, msg_b).
/// The result does not depend on the thread count.
std::vector<CollaborativeLink> find_links(const Corpus& corpus, const std::vector<Ect>& ects,
                                          const ProximityConfig& cfg, const TextSimilarity& sim,
                                          const LinkOptions& options = {});

/// Connected components over ECTs, ordered and numbered ("ccdp-0001", ...) by
/// their earliest ECT. Links keep the find_links order inside each CCDP.
/// Throws Error(kUnknownMessage) for a link endpoint outside `ects`.
std::vector<Ccdp> build_ccdps(const std::vector<Ect>& ects, const std::vector<CollaborativeLink>& links);

/// Graphviz: ECT nodes clustered per CCDP, one edge per link labelled with gp.
std::string ccdps_to_dot(const std::vector<Ect>& ects, const std::vector<Ccdp>& ccdps);

}  // namespace ccdp
