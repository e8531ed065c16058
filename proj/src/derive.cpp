// vdfm/derive.cpp - running selection programs to produce VLFM/VIFM documents
#include "vdfm/derive.hpp"

#include <algorithm>
#include <set>

#include "vdfm/printer.hpp"
#include "vdfm/schema.hpp"

namespace vdfm
{

namespace
{
std::string report_summary(const CoherenceReport & report)
{
  if (report.violations.empty()) {
    return "selection is incoherent";
  }
  std::string msg = "selection is incoherent: " + report.violations.front().message;
  if (report.violations.size() > 1) {
    msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
  }
  return msg;
}

std::string relation_list(const std::vector<std::string> & relations)
{
  std::string s;
  for (const auto & r : relations) {
    s += (s.empty() ? "" : ", ") + r;
  }
  return s;
}
}  // namespace

Incoherent::Incoherent(CoherenceReport report)
: Error("Incoherent", report_summary(report)), report_(std::move(report))
{
}

AmbiguousInstance::AmbiguousInstance(std::vector<std::string> relations)
: Error(
    "AmbiguousInstance",
    "instance does not fix exactly one version and one revision for: " + relation_list(relations)),
  relations_(std::move(relations))
{
}

namespace
{

bool single_choice(GroupKind g)
{
  return g == GroupKind::Xor || g == GroupKind::Or;
}

GroupKind normalized(GroupKind g, std::size_t kept_children)
{
  return kept_children == 1 && single_choice(g) ? GroupKind::Mandatory : g;
}

class Deriver
{
public:
  Deriver(const ModelDocument & input, const SelectionProgram & prog, bool instance)
  : in_(input), prog_(prog), instance_(instance), graph_(check_and_build(input, prog, instance))
  {
  }

  Derivation run()
  {
    cfg_ = close_selection(graph_, prog_.selections);
    const std::size_t n = graph_.size();
    sel_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      sel_[i] = cfg_.contains(graph_.nodes()[i].path);
    }
    CoherenceReport report = check_coherence(graph_, cfg_, CoherenceMode::Partial);
    rejected_.assign(n, false);
    for (const auto & r : prog_.rejections) {
      const int i = graph_.index_of(r);
      if (i < 0) {
        FeaturePath prefix;
        find_path(in_, r, &prefix);
        throw UnknownPath(r, prefix);
      }
      rejected_[static_cast<std::size_t>(i)] = true;
      if (sel_[static_cast<std::size_t>(i)]) {
        Violation v{ViolationKind::ExcludeConflict, {r}, {explain(cfg_, r)}, 1,
                    "rejected feature " + r.str() + " is selected"};
        report.violations.push_back(std::move(v));
      }
    }
    if (!report.coherent()) {
      throw Incoherent(std::move(report));
    }
    compute_kept();
    if (instance_) {
      // An undecided relation is ambiguous rather than incoherent.
      check_determinism();
      report = check_coherence(graph_, cfg_, CoherenceMode::Complete);
      if (!report.coherent()) {
        throw Incoherent(std::move(report));
      }
    }
    return {build(), cfg_};
  }

private:
  static ConstraintGraph check_and_build(const ModelDocument & input, const SelectionProgram & prog, bool instance)
  {
    const ModelKind want = instance ? ModelKind::Vlfm : ModelKind::Vcfm;
    if (prog.kind != (instance ? ProgramKind::Instance : ProgramKind::Family)) {
      throw WrongInput("program kind does not match the requested derivation");
    }
    if (input.kind != want) {
      throw WrongInput(
        std::string(instance ? "an instance" : "a family") + " program needs a " + std::string(to_string(want)) +
        " input, got " + std::string(to_string(input.kind)) + " " + input.name);
    }
    if (prog.input_model != input.name) {
      throw WrongInput("program reads model " + prog.input_model + " but the input is " + input.name);
    }
    return build_constraint_graph(input);
  }

  bool kept(int i) const { return kept_[static_cast<std::size_t>(i)]; }
  bool selected(int i) const { return sel_[static_cast<std::size_t>(i)]; }

  void drop(int i)
  {
    kept_[static_cast<std::size_t>(i)] = false;
    for (int c : graph_.node(i).children) {
      drop(c);
    }
  }

  void keep_children(const std::vector<int> & children, bool parent_selected)
  {
    const bool any = std::any_of(children.begin(), children.end(), [&](int c) { return selected(c); });
    for (int c : children) {
      if (instance_ ? selected(c) : (!parent_selected || !any || selected(c))) {
        kept_[static_cast<std::size_t>(c)] = !rejected_[static_cast<std::size_t>(c)];
      }
    }
  }

  void compute_kept()
  {
    const std::size_t n = graph_.size();
    kept_.assign(n, false);
    keep_children(graph_.roots(), !cfg_.selected.empty());
    for (std::size_t i = 0; i < n; ++i) {
      const int id = static_cast<int>(i);
      if (kept_[i]) {
        keep_children(graph_.node(id).children, sel_[i]);
      }
    }
    if (instance_) {
      return;
    }
    // Undecided features that can no longer appear in any completion are pruned.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const int id = static_cast<int>(i);
        if (!kept_[i] || sel_[i]) {
          continue;
        }
        if (dead(id)) {
          drop(id);
          changed = true;
        }
      }
    }
    CoherenceReport report;
    for (std::size_t i = 0; i < n; ++i) {
      const auto & node = graph_.nodes()[i];
      if (!sel_[i] || node.children.empty() || !single_choice(node.group)) {
        continue;
      }
      const bool open = std::none_of(node.children.begin(), node.children.end(), [&](int c) { return kept(c); });
      if (open) {
        std::vector<FeaturePath> involved{node.path};
        for (int c : node.children) {
          involved.push_back(graph_.node(c).path);
        }
        report.violations.push_back(
          {node.group == GroupKind::Xor ? ViolationKind::XorOverflow : ViolationKind::OrUnderflow, involved,
           {explain(cfg_, node.path)}, 0,
           std::string(to_string(node.group)) + " group of " + node.path.str() +
             " has no alternative left that is consistent with the selection"});
      }
    }
    if (!report.coherent()) {
      throw Incoherent(std::move(report));
    }
  }

  bool dead(int u) const
  {
    for (const auto & e : graph_.imply_edges()) {
      if (e.source == u && !kept(e.target)) {
        return true;
      }
    }
    for (const auto & e : graph_.exclude_edges()) {
      if ((e.a == u && selected(e.b)) || (e.b == u && selected(e.a))) {
        return true;
      }
    }
    const auto & node = graph_.node(u);
    if (node.children.empty()) {
      return false;
    }
    if (node.group == GroupKind::And || node.group == GroupKind::Mandatory) {
      return std::any_of(node.children.begin(), node.children.end(), [&](int c) { return !kept(c); });
    }
    if (single_choice(node.group)) {
      return std::none_of(node.children.begin(), node.children.end(), [&](int c) { return kept(c); });
    }
    return false;
  }

  void check_determinism() const
  {
    std::vector<std::string> ambiguous;
    for (int r : graph_.roots()) {
      if (!kept(r)) {
        continue;
      }
      const auto & rel = graph_.node(r);
      std::vector<int> versions;
      for (int v : rel.children) {
        if (kept(v)) {
          versions.push_back(v);
        }
      }
      bool ok = versions.size() == 1;
      if (ok) {
        const auto & revs = graph_.node(versions.front()).children;
        ok = std::count_if(revs.begin(), revs.end(), [&](int c) { return kept(c); }) == 1;
      }
      if (!ok) {
        ambiguous.push_back(rel.path.str());
      }
    }
    if (!ambiguous.empty()) {
      throw AmbiguousInstance(std::move(ambiguous));
    }
  }

  // Ops that turn the schema `base` into `target`, one definition per item.
  static std::vector<FeatureNode> rebuild_ops(const RelationSchema & base, const RelationSchema & target)
  {
    std::vector<FeatureNode> defs;
    std::set<std::string> used;
    auto def = [&](const std::string & item, ItemKind kind) -> FeatureNode & {
      std::string name = item;
      for (int k = 2; used.contains(name); ++k) {
        name = item + "-" + std::to_string(k);
      }
      used.insert(name);
      FeatureNode d;
      d.kind = kind == ItemKind::Field ? NodeKind::FieldDef : NodeKind::IcDef;
      d.name = name;
      d.group = default_group(d.kind);
      defs.push_back(std::move(d));
      return defs.back();
    };
    auto op_target = [](ItemKind k) { return k == ItemKind::Field ? OpTarget::Field : OpTarget::Ic; };

    std::vector<std::pair<const SchemaItem *, const SchemaItem *>> moved;  // (base, target)
    std::vector<const SchemaItem *> added;
    std::vector<std::pair<const SchemaItem *, const SchemaItem *>> modified;
    std::vector<const SchemaItem *> removed;
    auto plan = [&](const std::vector<SchemaItem> & from, const std::vector<SchemaItem> & to) {
      // Items surviving in place form the longest common prefix of the
      // surviving base order and the target order.
      std::vector<const SchemaItem *> surviving;
      for (const auto & b : from) {
        const SchemaItem * t = target.find(b.name);
        if (t != nullptr && t->kind == b.kind) {
          surviving.push_back(&b);
        }
      }
      std::size_t p = 0;
      while (p < surviving.size() && p < to.size() && surviving[p]->name == to[p].name) {
        ++p;
      }
      std::set<std::string> in_place;
      for (std::size_t i = 0; i < p; ++i) {
        in_place.insert(to[i].name);
        if (surviving[i]->payload != to[i].payload || surviving[i]->references != to[i].references) {
          modified.emplace_back(surviving[i], &to[i]);
        }
      }
      for (const auto & b : from) {
        if (in_place.contains(b.name)) {
          continue;
        }
        const SchemaItem * t = target.find(b.name);
        if (t == nullptr || t->kind != b.kind) {
          removed.push_back(&b);
        }
      }
      for (std::size_t i = p; i < to.size(); ++i) {
        const SchemaItem * b = base.find(to[i].name);
        if (b != nullptr && b->kind == to[i].kind) {
          moved.emplace_back(b, &to[i]);
        } else {
          added.push_back(&to[i]);
        }
      }
    };
    plan(base.fields, target.fields);
    plan(base.constraints, target.constraints);

    for (const auto * b : removed) {
      def(b->name, b->kind).ops.push_back(EvolutionOp::make(OpAction::Delete, op_target(b->kind), b->name));
    }
    for (const auto & [b, t] : modified) {
      def(t->name, t->kind).ops.push_back(EvolutionOp::make(OpAction::Modify, op_target(t->kind), t->name, t->payload));
    }
    // Adds must follow target order within each list; fields and ICs live in
    // separate lists so their relative order does not matter.
    for (const auto * list : {&target.fields, &target.constraints}) {
      for (const auto & t : *list) {
        const auto mv = std::find_if(moved.begin(), moved.end(), [&](const auto & m) { return m.second == &t; });
        const bool add = std::find(added.begin(), added.end(), &t) != added.end();
        if (mv == moved.end() && !add) {
          continue;
        }
        auto & d = def(t.name, t.kind);
        if (mv != moved.end()) {
          d.ops.push_back(EvolutionOp::make(OpAction::Delete, op_target(t.kind), t.name));
        }
        d.ops.push_back(EvolutionOp::make(OpAction::Add, op_target(t.kind), t.name, t.payload));
      }
    }
    return defs;
  }

  FeatureNode copy(const FeatureNode & src, const FeaturePath & path, Replayer & replayer)
  {
    FeatureNode out;
    out.kind = src.kind;
    out.name = src.name;
    out.trivia = src.trivia;
    if (src.kind == NodeKind::Revision) {
      out.group = src.group;
      out.children = src.children;
      for (auto & def : out.children) {
        def.span = {};
        for (auto & op : def.ops) {
          op.span = {};
        }
      }
      return out;
    }
    std::vector<const FeatureNode *> kept_children;
    for (const auto & c : src.children) {
      if (kept(graph_.index_of(path.child(c.name)))) {
        kept_children.push_back(&c);
      }
    }
    for (std::size_t k = 0; k < kept_children.size(); ++k) {
      const auto & c = *kept_children[k];
      out.children.push_back(copy(c, path.child(c.name), replayer));
    }
    if (src.kind == NodeKind::Version) {
      squash(src, path, out, replayer);
    }
    out.group = normalized(src.group, out.children.size());
    return out;
  }

  // Revisions whose immediate predecessor was pruned get ops rebuilding their
  // schema from the nearest kept predecessor (or from nothing).
  void squash(const FeatureNode & src, const FeaturePath & path, FeatureNode & out, Replayer & replayer)
  {
    std::optional<FeaturePath> prev;
    std::size_t out_index = 0;
    for (std::size_t k = 0; k < src.children.size(); ++k) {
      const FeaturePath rev = path.child(src.children[k].name);
      if (!kept(graph_.index_of(rev))) {
        continue;
      }
      const bool contiguous = prev ? *prev == path.child(src.children[k - 1].name) : k == 0;
      if (!contiguous) {
        const RelationSchema base = prev ? replayer.schema_at(*prev) : RelationSchema{};
        const RelationSchema target = replayer.schema_before_imports(rev);
        out.children[out_index].children = rebuild_ops(base, target);
        out.children[out_index].group = GroupKind::And;
      }
      prev = rev;
      ++out_index;
    }
  }

  ModelDocument build()
  {
    ModelDocument out;
    out.kind = instance_ ? ModelKind::Vifm : ModelKind::Vlfm;
    out.name = prog_.output_name;
    NeedsClause needs;
    needs.model = in_.name;
    needs.features = prog_.selections;
    out.needs.push_back(std::move(needs));

    Replayer replayer(in_, /*strict=*/false);
    SchemaDefinitionModel sdfm;
    sdfm.name = in_.sdfm ? in_.sdfm->name : out.name + "-Def";
    if (in_.sdfm) {
      sdfm.trivia = in_.sdfm->trivia;
      for (const auto & rel : in_.sdfm->relations) {
        const FeaturePath path{rel.name};
        if (kept(graph_.index_of(path))) {
          sdfm.relations.push_back(copy(rel, path, replayer));
        }
      }
      sdfm.group = normalized(in_.sdfm->group, sdfm.relations.size());
    }
    out.sdfm = std::move(sdfm);

    SchemaRelationModel srfm;
    srfm.name = in_.srfm ? in_.srfm->name : out.name + "-Rel";
    if (in_.srfm) {
      srfm.trivia = in_.srfm->trivia;
      for (const auto & c : in_.srfm->constraints) {
        if (kept(graph_.index_of(c.source)) && kept(graph_.index_of(c.target))) {
          CrossTreeConstraint copy = c;
          copy.span = copy.source_span = copy.target_span = {};
          srfm.constraints.push_back(std::move(copy));
        }
      }
    }
    out.srfm = std::move(srfm);
    return out;
  }

  const ModelDocument & in_;
  const SelectionProgram & prog_;
  bool instance_;
  ConstraintGraph graph_;
  Configuration cfg_;
  std::vector<bool> sel_;
  std::vector<bool> kept_;
  std::vector<bool> rejected_;
};

}  // namespace

Derivation derive_family_detailed(const ModelDocument & vcfm, const SelectionProgram & prog)
{
  return Deriver(vcfm, prog, false).run();
}

ModelDocument derive_family(const ModelDocument & vcfm, const SelectionProgram & prog)
{
  return derive_family_detailed(vcfm, prog).document;
}

Derivation derive_instance_detailed(const ModelDocument & vlfm, const SelectionProgram & prog)
{
  return Deriver(vlfm, prog, true).run();
}

ModelDocument derive_instance(const ModelDocument & vlfm, const SelectionProgram & prog)
{
  return derive_instance_detailed(vlfm, prog).document;
}

Derivation derive(const ModelDocument & input, const SelectionProgram & prog)
{
  return prog.kind == ProgramKind::Family ? derive_family_detailed(input, prog) : derive_instance_detailed(input, prog);
}

}  // namespace vdfm
