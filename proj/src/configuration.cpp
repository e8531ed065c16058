// vdfm/configuration.cpp - selection closure, coherence, enumeration, explanations
#include "vdfm/configuration.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include "vdfm/printer.hpp"

namespace vdfm
{

std::string_view to_string(ReasonKind kind)
{
  switch (kind) {
    case ReasonKind::Explicit: return "explicit";
    case ReasonKind::AncestorClosure: return "ancestor-closure";
    case ReasonKind::MandatoryClosure: return "mandatory-closure";
    case ReasonKind::ImpliedBy: return "implied-by";
  }
  return "?";
}

std::string_view to_string(ViolationKind kind)
{
  switch (kind) {
    case ViolationKind::ExcludeConflict: return "exclude-conflict";
    case ViolationKind::XorOverflow: return "xor-overflow";
    case ViolationKind::OrUnderflow: return "or-underflow";
    case ViolationKind::AndIncomplete: return "and-incomplete";
    case ViolationKind::MandatoryMissing: return "mandatory-missing";
  }
  return "?";
}

std::string describe(const Reason & reason)
{
  std::string s(to_string(reason.kind));
  switch (reason.kind) {
    case ReasonKind::Explicit:
      break;
    case ReasonKind::AncestorClosure:
      s += " of " + reason.cause.str();
      break;
    case ReasonKind::MandatoryClosure:
      s += reason.from_root ? " (root group, activated by " + reason.cause.str() + ")" : " of " + reason.cause.str();
      break;
    case ReasonKind::ImpliedBy:
      s += " " + reason.cause.str();
      if (reason.via_import) {
        s += " (import)";
      }
      break;
  }
  return s;
}

GraphMismatch::GraphMismatch(const std::string & config_model, const std::string & graph_model)
: Error("GraphMismatch", "configuration of model " + config_model + " checked against graph of model " + graph_model)
{
}

NotSelected::NotSelected(const FeaturePath & path)
: Error("NotSelected", path.str() + " is not part of the configuration")
{
}

TooLarge::TooLarge(std::size_t features, std::size_t cap)
: Error(
    "TooLarge", "model has " + std::to_string(features) + " selectable features; enumeration is capped at " +
                  std::to_string(cap))
{
}

namespace
{

bool propagates(GroupKind g)
{
  return g == GroupKind::And || g == GroupKind::Mandatory;
}

class Closure
{
public:
  explicit Closure(const ConstraintGraph & g) : g_(g), sel_(g.size(), false), reason_(g.size()) {}

  void run(const std::vector<FeaturePath> & explicit_paths)
  {
    for (const auto & p : explicit_paths) {
      const int i = g_.index_of(p);
      if (i < 0) {
        FeaturePath prefix = p;
        while (!prefix.empty() && g_.index_of(prefix) < 0) {
          prefix = prefix.parent();
        }
        throw UnknownPath(p, prefix);
      }
      add(i, {ReasonKind::Explicit, {}, false, false});
    }
    while (true) {
      ancestors();
      mandatory();
      if (!imply_once()) {
        break;
      }
    }
  }

  Configuration result() const
  {
    Configuration cfg;
    cfg.source_model = g_.model_name();
    for (std::size_t i = 0; i < sel_.size(); ++i) {
      if (sel_[i]) {
        cfg.selected.insert(g_.nodes()[i].path);
        cfg.reasons.emplace(g_.nodes()[i].path, *reason_[i]);
      }
    }
    return cfg;
  }

private:
  void add(int i, Reason r)
  {
    const auto k = static_cast<std::size_t>(i);
    if (!sel_[k]) {
      sel_[k] = true;
      reason_[k] = std::move(r);
      any_ = true;
    }
  }

  bool selected(int i) const { return sel_[static_cast<std::size_t>(i)]; }

  void ancestors()
  {
    for (std::size_t i = 0; i < g_.size(); ++i) {
      if (!sel_[i]) {
        continue;
      }
      for (int a = g_.nodes()[i].parent; a >= 0; a = g_.node(a).parent) {
        add(a, {ReasonKind::AncestorClosure, g_.nodes()[i].path, false, false});
      }
    }
  }

  void mandatory()
  {
    if (!any_) {
      return;
    }
    if (propagates(g_.root_group())) {
      // The first selected feature in pre-order is what activated the root group.
      FeaturePath trigger;
      for (std::size_t i = 0; i < g_.size(); ++i) {
        if (sel_[i]) {
          trigger = g_.nodes()[i].path;
          break;
        }
      }
      for (int r : g_.roots()) {
        add(r, {ReasonKind::MandatoryClosure, trigger, false, true});
      }
    }
    // Pre-order visits children after parents, so cascades settle in one pass.
    for (std::size_t i = 0; i < g_.size(); ++i) {
      const auto & n = g_.nodes()[i];
      if (sel_[i] && propagates(n.group)) {
        for (int c : n.children) {
          add(c, {ReasonKind::MandatoryClosure, n.path, false, false});
        }
      }
    }
  }

  bool imply_once()
  {
    for (const auto & e : g_.imply_edges()) {
      if (selected(e.source) && !selected(e.target)) {
        add(e.target, {ReasonKind::ImpliedBy, g_.node(e.source).path, e.derived, false});
        return true;
      }
    }
    return false;
  }

  const ConstraintGraph & g_;
  std::vector<bool> sel_;
  std::vector<std::optional<Reason>> reason_;
  bool any_ = false;
};

std::string group_owner(const ConstraintGraph & g, int parent)
{
  return parent < 0 ? "root group of " + (g.root_name().empty() ? g.model_name() : g.root_name())
                    : g.node(parent).path.str();
}

}  // namespace

Configuration close_selection(const ConstraintGraph & graph, const std::vector<FeaturePath> & explicit_paths)
{
  Closure c(graph);
  c.run(explicit_paths);
  return c.result();
}

ReasonChain explain(const Configuration & cfg, const FeaturePath & feature)
{
  if (!cfg.contains(feature)) {
    throw NotSelected(feature);
  }
  ReasonChain chain;
  std::set<FeaturePath> seen;
  FeaturePath cur = feature;
  while (seen.insert(cur).second) {
    const auto it = cfg.reasons.find(cur);
    const Reason r = it != cfg.reasons.end() ? it->second : Reason{};
    chain.push_back({cur, r});
    if (r.kind == ReasonKind::Explicit || r.cause.empty() || !cfg.contains(r.cause)) {
      break;
    }
    cur = r.cause;
  }
  return chain;
}

std::string render_chain(const ReasonChain & chain)
{
  std::string s;
  for (const auto & link : chain) {
    if (!s.empty()) {
      s += " <- ";
    }
    s += link.feature.str() + ": " + describe(link.reason);
  }
  return s;
}

CoherenceReport check_coherence(const ConstraintGraph & graph, const Configuration & cfg, CoherenceMode mode)
{
  if (cfg.source_model != graph.model_name()) {
    throw GraphMismatch(cfg.source_model, graph.model_name());
  }
  CoherenceReport report;
  auto sel = [&](int i) { return cfg.contains(graph.node(i).path); };
  auto finish = [&](Violation v) {
    for (const auto & p : v.involved) {
      if (cfg.contains(p)) {
        v.chains.push_back(explain(cfg, p));
      }
    }
    report.violations.push_back(std::move(v));
  };

  for (const auto & e : graph.exclude_edges()) {
    if (sel(e.a) && sel(e.b)) {
      const auto & a = graph.node(e.a).path;
      const auto & b = graph.node(e.b).path;
      finish({ViolationKind::ExcludeConflict, {a, b}, {}, 2,
              a.str() + " and " + b.str() + " are both selected but exclude each other"});
    }
  }

  auto group = [&](int parent, GroupKind kind, const std::vector<int> & children) {
    if (children.empty()) {
      return;
    }
    std::vector<FeaturePath> chosen;
    std::vector<FeaturePath> missing;
    for (int c : children) {
      (sel(c) ? chosen : missing).push_back(graph.node(c).path);
    }
    const std::string owner = group_owner(graph, parent);
    std::vector<FeaturePath> involved;
    if (parent >= 0) {
      involved.push_back(graph.node(parent).path);
    }
    switch (kind) {
      case GroupKind::Xor:
        if (chosen.size() > 1 || (chosen.empty() && mode == CoherenceMode::Complete)) {
          for (const auto & p : chosen.empty() ? missing : chosen) {
            involved.push_back(p);
          }
          finish({ViolationKind::XorOverflow, involved, {}, chosen.size(),
                  "xor group of " + owner + " has " + std::to_string(chosen.size()) +
                    " selected children; exactly one is required"});
        }
        break;
      case GroupKind::Or:
        if (chosen.empty() && mode == CoherenceMode::Complete) {
          involved.insert(involved.end(), missing.begin(), missing.end());
          finish({ViolationKind::OrUnderflow, involved, {}, 0,
                  "or group of " + owner + " has no selected child; at least one is required"});
        }
        break;
      case GroupKind::And:
      case GroupKind::Mandatory:
        if (!missing.empty()) {
          involved.insert(involved.end(), missing.begin(), missing.end());
          finish({kind == GroupKind::And ? ViolationKind::AndIncomplete : ViolationKind::MandatoryMissing, involved, {},
                  chosen.size(), std::string(to_string(kind)) + " group of " + owner + " is missing " + join_paths(missing)});
        }
        break;
      case GroupKind::Empty:
        break;
    }
  };

  if (!cfg.selected.empty()) {
    group(-1, graph.root_group(), graph.roots());
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const int id = static_cast<int>(i);
    if (sel(id)) {
      group(id, graph.node(id).group, graph.node(id).children);
    }
  }
  return report;
}

namespace
{

// Bit-level view of the graph for brute-force checks.
struct Masks
{
  std::size_t n = 0;
  std::vector<std::uint32_t> ancestors;
  std::vector<std::uint32_t> children;
  std::vector<bool> propagating;
  std::uint32_t roots = 0;
  bool root_propagates = false;
  std::vector<std::pair<int, int>> implies;

  explicit Masks(const ConstraintGraph & g) : n(g.size()), ancestors(n, 0), children(n, 0), propagating(n, false)
  {
    for (std::size_t i = 0; i < n; ++i) {
      const auto & node = g.nodes()[i];
      for (int a = node.parent; a >= 0; a = g.node(a).parent) {
        ancestors[i] |= 1u << a;
      }
      for (int c : node.children) {
        children[i] |= 1u << c;
      }
      propagating[i] = propagates(node.group);
    }
    for (int r : g.roots()) {
      roots |= 1u << r;
    }
    root_propagates = propagates(g.root_group());
    for (const auto & e : g.imply_edges()) {
      implies.emplace_back(e.source, e.target);
    }
  }

  // Closed under ancestor, and/mandatory (root included) and imply rules.
  [[nodiscard]] bool closed(std::uint32_t s) const
  {
    if (s != 0 && root_propagates && (s & roots) != roots) {
      return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((s >> i & 1u) == 0) {
        continue;
      }
      if ((s & ancestors[i]) != ancestors[i]) {
        return false;
      }
      if (propagating[i] && (s & children[i]) != children[i]) {
        return false;
      }
    }
    return std::all_of(implies.begin(), implies.end(), [&](const auto & e) {
      return (s >> e.first & 1u) == 0 || (s >> e.second & 1u) != 0;
    });
  }
};

Configuration from_mask(const ConstraintGraph & g, std::uint32_t s)
{
  Configuration cfg;
  cfg.source_model = g.model_name();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (s >> i & 1u) {
      cfg.selected.insert(g.nodes()[i].path);
      cfg.reasons.emplace(g.nodes()[i].path, Reason{});
    }
  }
  return cfg;
}

template <typename Visit>
void brute_force(const ConstraintGraph & graph, std::size_t max_features, Visit visit)
{
  const std::size_t cap = std::min<std::size_t>(max_features, 30);
  if (graph.size() > cap) {
    throw TooLarge(graph.size(), cap);
  }
  const Masks m(graph);
  const std::uint64_t total = std::uint64_t{1} << graph.size();
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto mask = static_cast<std::uint32_t>(s);
    if (!m.closed(mask)) {
      continue;
    }
    Configuration cfg = from_mask(graph, mask);
    if (check_coherence(graph, cfg).coherent()) {
      visit(std::move(cfg));
    }
  }
}

}  // namespace

std::vector<Configuration> enumerate_configurations(const ConstraintGraph & graph, std::size_t max_features)
{
  std::vector<Configuration> out;
  brute_force(graph, max_features, [&](Configuration cfg) { out.push_back(std::move(cfg)); });
  return out;
}

std::size_t count_configurations(const ConstraintGraph & graph, std::size_t max_features)
{
  std::size_t count = 0;
  brute_force(graph, max_features, [&](Configuration) { ++count; });
  return count;
}

std::vector<FeaturePath> ordered(const ConstraintGraph & graph, const Configuration & cfg)
{
  std::vector<FeaturePath> out;
  for (const auto & n : graph.nodes()) {
    if (cfg.contains(n.path)) {
      out.push_back(n.path);
    }
  }
  return out;
}

}  // namespace vdfm
