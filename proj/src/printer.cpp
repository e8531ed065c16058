// vdfm/printer.cpp - canonical formatting of model documents
#include "vdfm/printer.hpp"

#include "vdfm/lexer.hpp"

namespace vdfm
{

namespace
{

class Printer
{
public:
  std::string take() { return std::move(out_); }

  void model(const ModelDocument & doc, int depth)
  {
    const std::string kw(to_string(doc.kind));
    line(depth, doc.trivia, kw + " : " + doc.name + " ;");
    switch (doc.kind) {
      case ModelKind::Vdfm:
        for (const auto & sub : doc.sub_models) {
          model(sub, depth + 1);
        }
        break;
      case ModelKind::Vcfm:
        sdfm(*doc.sdfm, depth + 1);
        srfm(*doc.srfm, depth + 1);
        break;
      case ModelKind::Vlfm:
      case ModelKind::Vifm:
        for (const auto & n : doc.needs) {
          line(depth + 1, n.trivia, n.model + " : " + join_paths(n.features) + " ;");
        }
        sdfm(*doc.sdfm, depth + 1);
        srfm(*doc.srfm, depth + 1);
        for (const auto & v : doc.local_versions) {
          local(v, "VersionLM", depth + 1);
        }
        for (const auto & r : doc.local_revisions) {
          local(r, doc.kind == ModelKind::Vlfm ? "Revision LM" : "Revision IVM", depth + 1);
        }
        break;
    }
    line(depth, doc.footer_trivia, "end " + kw + " " + doc.name + " ;");
    if (depth == 0) {
      for (const auto & c : doc.trailing_comments) {
        out_ += c;
        out_ += '\n';
      }
    }
  }

private:
  static std::string group_suffix(GroupKind group, GroupKind fallback, bool has_children)
  {
    if (!has_children && group == fallback) {
      return {};
    }
    return " [" + std::string(to_string(group)) + "]";
  }

  static std::string value(const std::string & v)
  {
    return (is_identifier(v) && !is_keyword(v)) ? v : quote(v);
  }

  static std::string attributes(const std::vector<Attribute> & attrs)
  {
    std::string s = "(";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i > 0) {
        s += ", ";
      }
      s += attrs[i].name + " : " + value(attrs[i].value);
    }
    return s + ")";
  }

  void line(int depth, const Trivia & trivia, const std::string & text)
  {
    const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
    for (const auto & c : trivia.leading) {
      out_ += indent + c + '\n';
    }
    out_ += indent + text;
    if (!trivia.trailing.empty()) {
      out_ += ' ' + trivia.trailing;
    }
    out_ += '\n';
  }

  void sdfm(const SchemaDefinitionModel & m, int depth)
  {
    line(
      depth, m.trivia,
      "VSDFM : " + m.name + " ;" + group_suffix(m.group, kDefaultRootGroup, !m.relations.empty()));
    for (const auto & rel : m.relations) {
      node(rel, depth + 1);
    }
    line(depth, m.footer_trivia, "end VSDFM " + m.name + " ;");
  }

  void node(const FeatureNode & n, int depth)
  {
    std::string header;
    switch (n.kind) {
      case NodeKind::Relation: header = "Relation : "; break;
      case NodeKind::Version: header = "Version : "; break;
      case NodeKind::Revision: header = "Revision : "; break;
      case NodeKind::FieldDef: header = "Field Definition : "; break;
      case NodeKind::IcDef: header = "IC Definition : "; break;
    }
    header += n.name + " ;";
    if (n.kind != NodeKind::FieldDef && n.kind != NodeKind::IcDef) {
      header += group_suffix(n.group, default_group(n.kind), !n.children.empty());
    }
    line(depth, n.trivia, header);
    body(n, depth);
  }

  void body(const FeatureNode & n, int depth)
  {
    for (const auto & op : n.ops) {
      line(
        depth + 1, op.trivia,
        std::string(to_string(op.action)) + (op.target == OpTarget::Field ? " field " : " IC ") +
          attributes(op.attrs) + " ;");
    }
    for (const auto & c : n.children) {
      node(c, depth + 1);
    }
  }

  void srfm(const SchemaRelationModel & m, int depth)
  {
    line(depth, m.trivia, "VSRFM : " + m.name + " ;");
    for (const auto & c : m.constraints) {
      std::string text;
      switch (c.kind) {
        case ConstraintKind::Imply:
          text = "Imply " + c.source.str() + " -> " + c.target.str();
          break;
        case ConstraintKind::Exclude:
          text = "Exclude " + c.source.str() + " -- " + c.target.str();
          break;
        case ConstraintKind::Import: {
          text = "Import " + c.source.str() + " <- " + c.target.str() + " (";
          for (std::size_t i = 0; i < c.imported_items.size(); ++i) {
            text += (i > 0 ? ", " : "") + c.imported_items[i];
          }
          text += ")";
          break;
        }
      }
      if (!c.attrs.empty()) {
        text += " " + attributes(c.attrs);
      }
      line(depth + 1, c.trivia, text + " ;");
    }
    line(depth, m.footer_trivia, "end VSRFM " + m.name + " ;");
  }

  void local(const LocalFeature & l, const std::string & keyword, int depth)
  {
    line(
      depth, l.node.trivia,
      keyword + " : " + l.path.str() + " ;" +
        group_suffix(l.node.group, default_group(l.node.kind), !l.node.children.empty()));
    body(l.node, depth);
  }

  std::string out_;
};

}  // namespace

std::string join_paths(const std::vector<FeaturePath> & paths)
{
  std::string s;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i > 0) {
      s += ", ";
    }
    s += paths[i].str();
  }
  return s;
}

std::string pretty_print(const ModelDocument & doc)
{
  Printer p;
  p.model(doc, 0);
  return p.take();
}

}  // namespace vdfm
