// vdfm/parser.cpp - recursive-descent parser for models and selection programs
#include "vdfm/parser.hpp"

#include <algorithm>
#include <optional>

#include "vdfm/error.hpp"
#include "vdfm/lexer.hpp"

namespace vdfm
{

std::string_view to_string(ProgramKind kind)
{
  return kind == ProgramKind::Family ? "family" : "instance";
}

namespace
{

std::optional<GroupKind> group_from_word(std::string_view word)
{
  if (word == "and") return GroupKind::And;
  if (word == "xor") return GroupKind::Xor;
  if (word == "or") return GroupKind::Or;
  if (word == "mandatory") return GroupKind::Mandatory;
  if (word == "empty") return GroupKind::Empty;
  return std::nullopt;
}

std::string describe(const Token & tok)
{
  if (tok.kind == TokenKind::Eof) {
    return "end of input";
  }
  return std::string(to_string(tok.kind)) + " '" + std::string(tok.text) + "'";
}

class Parser
{
public:
  explicit Parser(std::string_view source) : source_(source), lines_(source), tokens_(tokenize(source)) {}

  ModelDocument parse_document()
  {
    ModelDocument doc = parse_model(/*nested=*/false);
    skip_comments();
    doc.trailing_comments = std::move(pending_);
    pending_.clear();
    expect_eof();
    return doc;
  }

  SelectionProgram parse_program()
  {
    SelectionProgram prog;
    const Token & kw = peek();
    if (kw.is_keyword("VLFM")) {
      prog.kind = ProgramKind::Family;
    } else if (kw.is_keyword("VIFM") || kw.is_keyword("IVFM")) {
      prog.kind = ProgramKind::Instance;
    } else {
      fail("expected selection program header", {"VLFM", "VIFM"});
    }
    const std::size_t begin = advance().span.begin;
    prog.output_name = expect_identifier("output model name");
    expect_punct("{");
    const Token & input = peek();
    prog.selection_span = input.span;
    prog.input_model = expect_identifier("input model name");
    expect_punct(":");
    prog.selections = parse_path_list("at least one selection required");
    accept_terminator();
    if (peek().is_keyword("reject")) {
      advance();
      expect_punct(":");
      prog.rejections = parse_path_list("at least one rejected feature required after 'reject:'");
      accept_terminator();
    }
    const Token & close = expect_punct("}");
    skip_comments();
    expect_eof();
    prog.span = span_from(begin, close);
    prog.comments = std::move(all_comments_);
    return prog;
  }

private:
  // ---- token cursor -------------------------------------------------------

  void skip_comments()
  {
    while (tokens_[pos_].kind == TokenKind::Comment) {
      pending_.emplace_back(tokens_[pos_].text);
      all_comments_.emplace_back(tokens_[pos_].text);
      ++pos_;
    }
  }

  // Looks past comments without consuming them.
  const Token & peek(std::size_t ahead = 0) const
  {
    std::size_t i = pos_;
    while (true) {
      if (tokens_[i].kind == TokenKind::Eof) {
        return tokens_[i];
      }
      if (tokens_[i].kind != TokenKind::Comment) {
        if (ahead == 0) {
          return tokens_[i];
        }
        --ahead;
      }
      ++i;
    }
  }

  const Token & advance()
  {
    skip_comments();
    const Token & tok = tokens_[pos_];
    if (tok.kind != TokenKind::Eof) {
      ++pos_;
    }
    last_ = &tok;
    return tok;
  }

  [[noreturn]] void fail(const std::string & message, std::vector<std::string> expected = {})
  {
    const Token & tok = peek();
    throw ParseError(
      message + ", found " + describe(tok), clamp(tok.span), std::move(expected),
      std::string(tok.text));
  }

  [[noreturn]] void fail_at(const Token & tok, const std::string & message)
  {
    throw ParseError(message, clamp(tok.span), {}, std::string(tok.text));
  }

  SourceSpan clamp(SourceSpan span) const
  {
    if (span.begin >= source_.size() && !source_.empty()) {
      return lines_.span(source_.size() - 1, source_.size());
    }
    return span;
  }

  SourceSpan span_from(std::size_t begin, const Token & last) const
  {
    return lines_.span(begin, last.span.end);
  }

  const Token & expect_keyword(std::string_view kw)
  {
    if (!peek().is_keyword(kw)) {
      fail("expected '" + std::string(kw) + "'", {std::string(kw)});
    }
    return advance();
  }

  const Token & expect_punct(std::string_view p)
  {
    if (!peek().is_punct(p)) {
      fail("expected '" + std::string(p) + "'", {std::string(p)});
    }
    return advance();
  }

  std::string expect_identifier(std::string_view what)
  {
    if (peek().kind != TokenKind::Identifier) {
      fail("expected " + std::string(what), {"identifier"});
    }
    return std::string(advance().text);
  }

  void expect_eof()
  {
    if (peek().kind != TokenKind::Eof) {
      fail("expected end of input", {"end of input"});
    }
  }

  void accept_terminator()
  {
    if (peek().is_punct(";") || peek().is_punct(".")) {
      advance();
    }
  }

  // ---- trivia -------------------------------------------------------------

  Trivia begin_element()
  {
    skip_comments();
    Trivia t;
    t.leading = std::move(pending_);
    pending_.clear();
    return t;
  }

  void end_element(Trivia & t)
  {
    for (auto & c : pending_) {
      t.leading.push_back(std::move(c));
    }
    pending_.clear();
    if (last_ && tokens_[pos_].kind == TokenKind::Comment &&
        tokens_[pos_].span.line == last_->span.line) {
      t.trailing = std::string(tokens_[pos_].text);
      all_comments_.emplace_back(tokens_[pos_].text);
      ++pos_;
    }
  }

  // ---- models -------------------------------------------------------------

  static std::optional<ModelKind> model_kind(const Token & tok)
  {
    if (tok.kind != TokenKind::Keyword) return std::nullopt;
    if (tok.text == "VDFM") return ModelKind::Vdfm;
    if (tok.text == "VCFM") return ModelKind::Vcfm;
    if (tok.text == "VLFM") return ModelKind::Vlfm;
    if (tok.text == "VIFM" || tok.text == "IVFM") return ModelKind::Vifm;
    return std::nullopt;
  }

  ModelDocument parse_model(bool nested)
  {
    ModelDocument doc;
    doc.trivia = begin_element();
    const Token & kw = peek();
    const auto kind = model_kind(kw);
    if (!kind || (nested && *kind == ModelKind::Vdfm)) {
      fail(
        nested ? "expected sub-model header" : "expected model header",
        nested ? std::vector<std::string>{"VCFM", "VLFM", "VIFM"}
               : std::vector<std::string>{"VDFM", "VCFM", "VLFM", "VIFM"});
    }
    doc.kind = *kind;
    const std::size_t begin = advance().span.begin;
    expect_punct(":");
    doc.name = expect_identifier("model name");
    expect_punct(";");
    end_element(doc.trivia);

    switch (doc.kind) {
      case ModelKind::Vdfm:
        while (true) {
          const Token & t = peek();
          if (t.is_keyword("end")) break;
          doc.sub_models.push_back(parse_model(/*nested=*/true));
        }
        break;
      case ModelKind::Vcfm:
        doc.sdfm = parse_sdfm();
        doc.srfm = parse_srfm();
        break;
      case ModelKind::Vlfm:
      case ModelKind::Vifm:
        parse_needs(doc);
        doc.sdfm = parse_sdfm();
        doc.srfm = parse_srfm();
        parse_locals(doc);
        break;
    }

    doc.footer_trivia = begin_element();
    expect_keyword("end");
    const Token & fkw = peek();
    const auto fkind = model_kind(fkw);
    if (!fkind || *fkind != doc.kind) {
      fail("expected '" + std::string(to_string(doc.kind)) + "' in footer", {std::string(to_string(doc.kind))});
    }
    advance();
    check_footer_name(doc.name);
    const Token & semi = expect_punct(";");
    end_element(doc.footer_trivia);
    doc.span = span_from(begin, semi);
    return doc;
  }

  void check_footer_name(const std::string & header_name)
  {
    const Token & name_tok = peek();
    if (name_tok.kind != TokenKind::Identifier) {
      fail("expected footer name", {"identifier"});
    }
    if (name_tok.text != header_name) {
      fail_at(
        name_tok, "footer name " + std::string(name_tok.text) + " does not match header " + header_name);
    }
    advance();
  }

  GroupKind parse_group(GroupKind fallback, bool allow_empty = true)
  {
    if (!peek().is_punct("[")) {
      return fallback;
    }
    advance();
    const Token & word = peek();
    const auto g = word.kind == TokenKind::Identifier ? group_from_word(word.text) : std::nullopt;
    if (!g) {
      fail("expected group relation", {"and", "xor", "or", "mandatory", "empty"});
    }
    if (*g == GroupKind::Empty && !allow_empty) {
      fail_at(word, "group relation 'empty' is not allowed on local additions");
    }
    advance();
    expect_punct("]");
    return *g;
  }

  SchemaDefinitionModel parse_sdfm()
  {
    SchemaDefinitionModel sdfm;
    sdfm.trivia = begin_element();
    const std::size_t begin = expect_keyword("VSDFM").span.begin;
    expect_punct(":");
    sdfm.name = expect_identifier("schema definition model name");
    expect_punct(";");
    sdfm.group = parse_group(kDefaultRootGroup);
    end_element(sdfm.trivia);
    parse_nodes(-1, sdfm.relations);
    sdfm.footer_trivia = begin_element();
    if (!peek().is_keyword("end")) {
      fail("expected 'Relation' or 'end'", {"Relation", "end"});
    }
    advance();
    expect_keyword("VSDFM");
    check_footer_name(sdfm.name);
    const Token & semi = expect_punct(";");
    end_element(sdfm.footer_trivia);
    sdfm.span = span_from(begin, semi);
    return sdfm;
  }

  FeatureNode parse_header(NodeKind kind, std::string_view what, bool allow_empty_group = true)
  {
    FeatureNode node;
    node.kind = kind;
    node.trivia = begin_element();
    const std::size_t begin = advance().span.begin;  // leading keyword(s) checked by caller
    if (kind == NodeKind::FieldDef || kind == NodeKind::IcDef) {
      expect_keyword("Definition");
    }
    expect_punct(":");
    node.name = expect_identifier(what);
    const Token & semi = expect_punct(";");
    node.group = default_group(kind);
    if (kind != NodeKind::FieldDef && kind != NodeKind::IcDef) {
      node.group = parse_group(node.group, allow_empty_group);
    }
    node.span = span_from(begin, semi);
    end_element(node.trivia);
    return node;
  }

  // Nesting level of the node header at the cursor, or -1.
  int node_level()
  {
    const Token & t = peek();
    if (t.is_keyword("Relation")) return 0;
    if (t.is_keyword("Version")) return 1;
    if (t.is_keyword("Revision") && peek(1).is_punct(":")) return 2;
    if ((t.is_keyword("Field") || t.is_keyword("IC")) && peek(1).is_keyword("Definition")) return 3;
    return -1;
  }

  // A node attaches to the nearest open node of a lower level, so a skipped
  // layer still parses and is left for validation to report.
  void parse_nodes(int parent_level, std::vector<FeatureNode> & out)
  {
    for (int level = node_level(); level > parent_level; level = node_level()) {
      switch (level) {
        case 0: out.push_back(parse_header(NodeKind::Relation, "relation name")); break;
        case 1: out.push_back(parse_header(NodeKind::Version, "version name")); break;
        case 2: out.push_back(parse_header(NodeKind::Revision, "revision name")); break;
        default:
          out.push_back(parse_definition(peek().is_keyword("Field") ? NodeKind::FieldDef : NodeKind::IcDef));
          continue;
      }
      parse_nodes(level, out.back().children);
    }
  }

  FeatureNode parse_revision(bool allow_empty_group = true)
  {
    FeatureNode rev = parse_header(NodeKind::Revision, "revision name", allow_empty_group);
    parse_definitions(rev);
    return rev;
  }

  void parse_definitions(FeatureNode & rev)
  {
    while (true) {
      const Token & t = peek();
      if (t.is_keyword("Field")) {
        rev.children.push_back(parse_definition(NodeKind::FieldDef));
      } else if (t.is_keyword("IC")) {
        rev.children.push_back(parse_definition(NodeKind::IcDef));
      } else {
        break;
      }
    }
  }

  FeatureNode parse_definition(NodeKind kind)
  {
    FeatureNode def = parse_header(
      kind, kind == NodeKind::FieldDef ? "field definition name" : "IC definition name");
    while (peek().is_keyword("Add") || peek().is_keyword("Delete") || peek().is_keyword("Modify")) {
      def.ops.push_back(parse_op());
    }
    return def;
  }

  EvolutionOp parse_op()
  {
    EvolutionOp op;
    op.trivia = begin_element();
    const Token & action = advance();
    op.action = action.text == "Add" ? OpAction::Add
              : action.text == "Delete" ? OpAction::Delete
                                        : OpAction::Modify;
    const Token & target = peek();
    if (target.is_keyword("field")) {
      op.target = OpTarget::Field;
    } else if (target.is_keyword("IC")) {
      op.target = OpTarget::Ic;
    } else {
      fail("expected 'field' or 'IC' after '" + std::string(action.text) + "'", {"field", "IC"});
    }
    advance();
    const Token & open = peek();
    auto attrs = parse_attributes();
    const auto required = required_attributes(op.action, op.target);
    for (const auto & a : attrs) {
      if (std::find(required.begin(), required.end(), a.name) == required.end()) {
        fail_at(open, "unexpected attribute '" + a.name + "' for " + std::string(action.text) + " " +
                        std::string(target.text));
      }
      if (std::count_if(attrs.begin(), attrs.end(), [&](const Attribute & b) { return b.name == a.name; }) > 1) {
        fail_at(open, "duplicate attribute '" + a.name + "'");
      }
      if (a.value.empty()) {
        fail_at(open, "attribute '" + a.name + "' must not be empty");
      }
    }
    for (auto req : required) {
      const auto it = std::find_if(attrs.begin(), attrs.end(), [&](const Attribute & a) { return a.name == req; });
      if (it == attrs.end()) {
        fail_at(open, "missing attribute '" + std::string(req) + "' for " + std::string(action.text) + " " +
                        std::string(target.text));
      }
      op.attrs.push_back(*it);
    }
    const Token & semi = expect_punct(";");
    op.span = span_from(action.span.begin, semi);
    end_element(op.trivia);
    return op;
  }

  std::vector<Attribute> parse_attributes()
  {
    std::vector<Attribute> attrs;
    expect_punct("(");
    while (true) {
      Attribute a;
      a.name = expect_identifier("attribute name");
      expect_punct(":");
      const Token & v = peek();
      if (v.kind == TokenKind::Identifier) {
        a.value = std::string(v.text);
      } else if (v.kind == TokenKind::Literal) {
        a.value = unquote(v.text);
      } else {
        fail("expected attribute value", {"identifier", "literal"});
      }
      advance();
      attrs.push_back(std::move(a));
      if (peek().is_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct(")");
    return attrs;
  }

  FeaturePath parse_path(SourceSpan * span = nullptr)
  {
    const Token & first = peek();
    std::vector<std::string> segs;
    segs.push_back(expect_identifier("feature name"));
    while (peek().is_punct(">")) {
      advance();
      segs.push_back(expect_identifier("feature name after '>'"));
    }
    if (span) {
      *span = span_from(first.span.begin, *last_);
    }
    return FeaturePath(std::move(segs));
  }

  std::vector<FeaturePath> parse_path_list(const std::string & empty_message)
  {
    if (peek().kind != TokenKind::Identifier) {
      fail(empty_message, {"identifier"});
    }
    std::vector<FeaturePath> out;
    out.push_back(parse_path());
    while (peek().is_punct(",")) {
      advance();
      out.push_back(parse_path());
    }
    return out;
  }

  SchemaRelationModel parse_srfm()
  {
    SchemaRelationModel srfm;
    srfm.trivia = begin_element();
    const std::size_t begin = expect_keyword("VSRFM").span.begin;
    expect_punct(":");
    srfm.name = expect_identifier("schema relation model name");
    expect_punct(";");
    end_element(srfm.trivia);
    while (true) {
      const Token & t = peek();
      if (t.is_keyword("Imply") || t.is_keyword("Exclude") || t.is_keyword("Import")) {
        srfm.constraints.push_back(parse_constraint());
      } else {
        break;
      }
    }
    srfm.footer_trivia = begin_element();
    if (!peek().is_keyword("end")) {
      fail("expected 'Imply', 'Exclude', 'Import' or 'end'", {"Imply", "Exclude", "Import", "end"});
    }
    advance();
    expect_keyword("VSRFM");
    check_footer_name(srfm.name);
    const Token & semi = expect_punct(";");
    end_element(srfm.footer_trivia);
    srfm.span = span_from(begin, semi);
    return srfm;
  }

  CrossTreeConstraint parse_constraint()
  {
    CrossTreeConstraint c;
    c.trivia = begin_element();
    const Token & kw = advance();
    c.kind = kw.text == "Imply" ? ConstraintKind::Imply
           : kw.text == "Exclude" ? ConstraintKind::Exclude
                                  : ConstraintKind::Import;
    c.source = parse_path(&c.source_span);
    const std::string_view arrow = c.kind == ConstraintKind::Imply ? "->"
                                 : c.kind == ConstraintKind::Exclude ? "--"
                                                                     : "<-";
    expect_punct(arrow);
    c.target = parse_path(&c.target_span);
    if (c.kind == ConstraintKind::Import) {
      expect_punct("(");
      c.imported_items.push_back(expect_identifier("imported item name"));
      while (peek().is_punct(",")) {
        advance();
        c.imported_items.push_back(expect_identifier("imported item name"));
      }
      expect_punct(")");
    } else if (peek().is_punct("(")) {
      c.attrs = parse_attributes();
    }
    const Token & semi = expect_punct(";");
    c.span = span_from(kw.span.begin, semi);
    end_element(c.trivia);
    return c;
  }

  void parse_needs(ModelDocument & doc)
  {
    while (peek().kind == TokenKind::Identifier) {
      NeedsClause needs;
      needs.trivia = begin_element();
      const Token & model_tok = peek();
      needs.model = expect_identifier("input model name");
      if (!doc.needs.empty() && needs.model != doc.needs.front().model) {
        fail_at(
          model_tok, "needs clause names model " + needs.model + ", expected " + doc.needs.front().model);
      }
      expect_punct(":");
      needs.features = parse_path_list("at least one selection required");
      const Token & semi = expect_punct(";");
      needs.span = span_from(model_tok.span.begin, semi);
      end_element(needs.trivia);
      doc.needs.push_back(std::move(needs));
    }
    if (doc.needs.empty()) {
      fail("expected needs clause '<input model> : feature, ... ;'", {"identifier"});
    }
  }

  FeaturePath parse_local_path(std::size_t min_depth, std::string_view what)
  {
    const Token & first = peek();
    FeaturePath path = parse_path();
    if (path.depth() < min_depth) {
      fail_at(first, std::string(what) + " path must name its anchor, e.g. Relation>Name");
    }
    return path;
  }

  void parse_locals(ModelDocument & doc)
  {
    const bool logical = doc.kind == ModelKind::Vlfm;
    while (true) {
      const Token & t = peek();
      const bool version_lm = t.is_keyword("VersionLM");
      const bool revision_lm =
        t.is_keyword("RevisionLM") || (t.is_keyword("Revision") && peek(1).is_keyword("LM"));
      const bool revision_ivm = t.is_keyword("Revision") && peek(1).is_keyword("IVM");
      if (!version_lm && !revision_lm && !revision_ivm) {
        break;
      }
      if ((version_lm || revision_lm) && !logical) {
        fail_at(t, "local versions and 'Revision LM' are only allowed in a VLFM");
      }
      if (revision_ivm && logical) {
        fail_at(t, "'Revision IVM' is only allowed in a VIFM");
      }
      LocalFeature local;
      local.node.trivia = begin_element();
      const std::size_t begin = advance().span.begin;
      if (t.is_keyword("Revision")) {
        advance();  // LM / IVM
      }
      expect_punct(":");
      local.node.kind = version_lm ? NodeKind::Version : NodeKind::Revision;
      local.path = parse_local_path(2, version_lm ? "VersionLM" : "local revision");
      local.node.name = local.path.leaf();
      const Token & semi = expect_punct(";");
      local.node.group = parse_group(default_group(local.node.kind), /*allow_empty=*/false);
      local.node.span = span_from(begin, semi);
      end_element(local.node.trivia);
      if (version_lm) {
        while (peek().is_keyword("Revision") && peek(1).is_punct(":")) {
          local.node.children.push_back(parse_revision(/*allow_empty_group=*/false));
        }
        doc.local_versions.push_back(std::move(local));
      } else {
        parse_definitions(local.node);
        doc.local_revisions.push_back(std::move(local));
      }
    }
  }

  std::string_view source_;
  LineIndex lines_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Token * last_ = nullptr;
  std::vector<std::string> pending_;
  std::vector<std::string> all_comments_;
};

}  // namespace

ModelDocument parse_vdfm(std::string_view source)
{
  Parser p(source);
  return p.parse_document();
}

SelectionProgram parse_selection_program(std::string_view source)
{
  Parser p(source);
  return p.parse_program();
}

}  // namespace vdfm
