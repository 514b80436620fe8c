#include "ccdp/linker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "ccdp/union_find.hpp"

namespace ccdp {

std::vector<CollaborativeLink> find_links(const Corpus& corpus, const std::vector<Ect>& ects,
                                          const ProximityConfig& cfg, const TextSimilarity& sim,
                                          const LinkOptions& options) {
  cfg.validate();
  const auto messages = corpus.messages();
  const std::size_t n = messages.size();
  const auto ect_index = index_ects(ects);

  std::vector<std::size_t> ect_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = ect_index.find(messages[i].id);
    if (it == ect_index.end()) {
      throw Error(ErrorCode::kUnknownMessage, "message " + messages[i].id + " belongs to no ECT");
    }
    ect_of[i] = it->second;
  }
  std::vector<MessageText> texts;
  texts.reserve(n);
  for (const auto& m : messages) texts.push_back(extract_text(m, sim));

  // Row i holds the links (i, j > i). Rows are claimed dynamically but each
  // pair is scored by exactly one pure call, so the schedule cannot change
  // any value.
  std::vector<std::vector<CollaborativeLink>> rows(n);
  std::atomic<std::size_t> next_row{0};
  const auto worker = [&] {
    for (std::size_t i = next_row.fetch_add(1); i < n; i = next_row.fetch_add(1)) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (ect_of[i] == ect_of[j]) continue;
        if (options.horizon_hours &&
            std::abs(hours_between(messages[i].sent_at, messages[j].sent_at)) > *options.horizon_hours) {
          continue;
        }
        const ProximityBreakdown b =
            global_proximity(messages[i], texts[i], messages[j], texts[j], cfg, sim);
        if (b.gp >= cfg.threshold) rows[i].push_back({messages[i].id, messages[j].id, b});
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<CollaborativeLink> links;
  for (auto& row : rows) {
    for (auto& link : row) links.push_back(std::move(link));
  }
  std::sort(links.begin(), links.end(), [](const CollaborativeLink& x, const CollaborativeLink& y) {
    if (x.breakdown.gp != y.breakdown.gp) return x.breakdown.gp > y.breakdown.gp;
    return std::tie(x.msg_a, x.msg_b) < std::tie(y.msg_a, y.msg_b);
  });
  return links;
}

std::vector<Ccdp> build_ccdps(const std::vector<Ect>& ects, const std::vector<CollaborativeLink>& links) {
  const auto ect_index = index_ects(ects);
  const auto ect_for = [&](const std::string& id) {
    const auto it = ect_index.find(id);
    if (it == ect_index.end()) throw Error(ErrorCode::kUnknownMessage, "link endpoint " + id + " is in no ECT");
    return it->second;
  };

  UnionFind sets(ects.size());
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  endpoints.reserve(links.size());
  for (const auto& link : links) {
    const std::size_t a = ect_for(link.msg_a);
    const std::size_t b = ect_for(link.msg_b);
    endpoints.emplace_back(a, b);
    sets.unite(a, b);
  }

  // ECTs are already ordered by earliest member, so scanning them in order
  // numbers components by their earliest ECT.
  std::map<std::size_t, std::size_t> ccdp_of_root;
  std::vector<Ccdp> ccdps;
  for (std::size_t e = 0; e < ects.size(); ++e) {
    auto [it, inserted] = ccdp_of_root.try_emplace(sets.find(e), ccdps.size());
    if (inserted) ccdps.emplace_back();
    ccdps[it->second].ect_ids.push_back(ects[e].ect_id);
  }
  for (std::size_t l = 0; l < links.size(); ++l) {
    ccdps[ccdp_of_root.at(sets.find(endpoints[l].first))].links.push_back(links[l]);
  }
  for (std::size_t i = 0; i < ccdps.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ccdp-%04zu", i + 1);
    ccdps[i].ccdp_id = buf;
  }
  return ccdps;
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string ccdps_to_dot(const std::vector<Ect>& ects, const std::vector<Ccdp>& ccdps) {
  const auto ect_index = index_ects(ects);
  std::map<std::string, const Ect*> by_id;
  for (const auto& e : ects) by_id.emplace(e.ect_id, &e);

  std::ostringstream out;
  out << "graph ccdp {\n";
  out << "  node [shape=box];\n";
  for (const auto& c : ccdps) {
    std::string cluster = c.ccdp_id;
    std::replace(cluster.begin(), cluster.end(), '-', '_');
    out << "  subgraph cluster_" << cluster << " {\n";
    out << "    label=\"" << dot_escape(c.ccdp_id) << "\";\n";
    for (const auto& id : c.ect_ids) {
      const auto it = by_id.find(id);
      const std::size_t size = it == by_id.end() ? 0 : it->second->message_ids.size();
      out << "    \"" << dot_escape(id) << "\" [label=\"" << dot_escape(id) << "\\n" << size
          << (size == 1 ? " message" : " messages") << "\"];\n";
    }
    out << "  }\n";
  }
  for (const auto& c : ccdps) {
    for (const auto& link : c.links) {
      const auto& a = ects[ect_index.at(link.msg_a)].ect_id;
      const auto& b = ects[ect_index.at(link.msg_b)].ect_id;
      out << "  \"" << dot_escape(a) << "\" -- \"" << dot_escape(b) << "\" [label=\""
          << fixed3(link.breakdown.gp) << "\", weight=" << fixed3(link.breakdown.gp)
          << ", tooltip=\"" << dot_escape(link.msg_a) << " / " << dot_escape(link.msg_b) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ccdp
