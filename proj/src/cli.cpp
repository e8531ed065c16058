// vdfm/cli.cpp - the `vdfm` command-line driver
#include "vdfm/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "vdfm/configuration.hpp"
#include "vdfm/derive.hpp"
#include "vdfm/ids.hpp"
#include "vdfm/parser.hpp"
#include "vdfm/printer.hpp"
#include "vdfm/semantics.hpp"

namespace vdfm::cli
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

struct Message
{
  std::string file;
  Severity severity = Severity::Error;
  std::string code;
  std::string text;
  SourceSpan span;
  std::vector<std::string> chain;
};

// Thrown inside a command to stop with an exit status after reporting.
struct Stop
{
  int code;
};

class Session
{
public:
  Session(std::ostream & out, std::ostream & err) : out_(out), err_(err), color_(use_color(err)) {}

  std::ostream & out() { return out_; }
  std::ostream & err() { return err_; }

  void emit(const Message & m)
  {
    std::string where = m.file;
    if (m.span.valid()) {
      where += ":" + std::to_string(m.span.line) + ":" + std::to_string(m.span.column);
    }
    const std::string sev(to_string(m.severity));
    const char * paint = m.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m";
    err_ << where << ": " << (color_ ? paint + sev + "\x1b[0m" : sev) << "[" << m.code << "]: " << m.text << "\n";
    for (const auto & line : m.chain) {
      err_ << "    " << line << "\n";
    }
  }

  void fail(const std::string & file, const std::string & code, const std::string & text, SourceSpan span = {}, std::vector<std::string> chain = {})
  {
    emit({file, Severity::Error, code, text, span, std::move(chain)});
  }

  std::string read(const std::string & path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) {
      fail(path, "IOError", "cannot read file");
      throw Stop{kUsage};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string & path, const std::string & text)
  {
    std::ofstream o(path, std::ios::binary | std::ios::trunc);
    if (!o || !(o << text) || !o.flush()) {
      fail(path, "IOError", "cannot write file");
      throw Stop{kUsage};
    }
  }

  ModelDocument model(const std::string & path)
  {
    const std::string src = read(path);
    try {
      return parse_vdfm(src);
    } catch (const ParseError & e) {
      fail(path, e.code(), e.what(), e.span());
      throw Stop{kFailure};
    }
  }

  SelectionProgram program(const std::string & path)
  {
    const std::string src = read(path);
    try {
      return parse_selection_program(src);
    } catch (const ParseError & e) {
      fail(path, e.code(), e.what(), e.span());
      throw Stop{kFailure};
    }
  }

  // Reports every diagnostic; true if none is an error.
  bool report(const std::string & file, const ValidationReport & r)
  {
    for (const auto & d : r.diagnostics) {
      emit({file, d.severity, d.code, d.message, d.span, d.notes});
    }
    return r.ok();
  }

  void incoherent(const std::string & file, const CoherenceReport & r)
  {
    for (const auto & v : r.violations) {
      std::vector<std::string> chain;
      for (const auto & c : v.chains) {
        chain.push_back(render_chain(c));
      }
      fail(file, "Incoherent", std::string(to_string(v.kind)) + ": " + v.message, {}, std::move(chain));
    }
  }

private:
  static bool use_color(std::ostream & err)
  {
    const char * env = std::getenv("VDFM_COLOR");
    const std::string mode = env ? env : "auto";
    if (mode == "always") return true;
    if (mode == "never") return false;
    return &err == &std::cerr && isatty(STDERR_FILENO) != 0;
  }

  std::ostream & out_;
  std::ostream & err_;
  bool color_;
};

json to_json(const Message & m)
{
  json j = {
    {"code", m.code},
    {"severity", std::string(to_string(m.severity))},
    {"file", m.file},
    {"line", m.span.line},
    {"col", m.span.column},
    {"message", m.text},
  };
  if (!m.chain.empty()) {
    j["chain"] = m.chain;
  }
  return j;
}

bool is_program(const std::string & path)
{
  return fs::path(path).extension() == ".vsel";
}

int cmd_check(Session & s, const std::vector<std::string> & files, bool as_json)
{
  int status = kOk;
  json all = json::array();
  std::vector<Message> found;
  for (const auto & file : files) {
    std::string src;
    {
      std::ifstream in(file, std::ios::binary);
      if (!in || fs::is_directory(file)) {
        found.push_back({file, Severity::Error, "IOError", "cannot read file", {}, {}});
        status = kUsage;
        continue;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      src = ss.str();
    }
    try {
      if (is_program(file)) {
        parse_selection_program(src);
        continue;
      }
      const auto doc = parse_vdfm(src);
      for (const auto & d : validate(doc).diagnostics) {
        found.push_back({file, d.severity, d.code, d.message, d.span, d.notes});
        if (d.severity == Severity::Error && status == kOk) {
          status = kFailure;
        }
      }
    } catch (const ParseError & e) {
      found.push_back({file, Severity::Error, e.code(), e.what(), e.span(), {}});
      if (status == kOk) {
        status = kFailure;
      }
    }
  }
  for (const auto & m : found) {
    if (as_json) {
      all.push_back(to_json(m));
    } else {
      s.emit(m);
    }
  }
  if (as_json) {
    s.out() << all.dump(2) << "\n";
  }
  return status;
}

const ModelDocument & pick(Session & s, const std::string & file, const ModelDocument & doc, const std::string & name)
{
  if (doc.kind != ModelKind::Vdfm) {
    return doc;
  }
  if (const ModelDocument * sub = doc.sub_model(name)) {
    return *sub;
  }
  s.fail(file, "WrongInput", "VDFM " + doc.name + " has no sub-model named " + (name.empty() ? "(none given)" : name));
  throw Stop{kUsage};
}

int cmd_derive(Session & s, const std::string & model_file, const std::string & program_file, const std::string & out_dir, bool explain_flag)
{
  const ModelDocument container = s.model(model_file);
  const SelectionProgram prog = s.program(program_file);
  const ModelDocument & input = pick(s, model_file, container, prog.input_model);
  Derivation d;
  try {
    d = derive(input, prog);
  } catch (const WrongInput & e) {
    s.fail(program_file, e.code(), e.what(), prog.span);
    return kUsage;
  } catch (const NotValidated & e) {
    s.report(model_file, e.report());
    return kFailure;
  } catch (const Incoherent & e) {
    s.incoherent(program_file, e.report());
    return kFailure;
  } catch (const UnknownPath & e) {
    s.fail(program_file, e.code(), e.what(), prog.selection_span);
    return kFailure;
  } catch (const Error & e) {
    s.fail(model_file, e.code(), e.what(), e.span());
    return kFailure;
  }
  const auto check = validate(d.document);
  if (!check.ok()) {
    s.fail(model_file, "InternalError", "derived model " + d.document.name + " does not validate");
    s.report(d.document.name + ".vdfm", check);
    return kInternal;
  }
  if (explain_flag) {
    const auto graph = build_constraint_graph(input);
    for (const auto & p : ordered(graph, d.configuration)) {
      if (d.configuration.reasons.at(p).kind != ReasonKind::Explicit) {
        s.err() << render_chain(explain(d.configuration, p)) << "\n";
      }
    }
  }
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  s.write((dir / (d.document.name + ".vdfm")).string(), pretty_print(d.document));
  return kOk;
}

const ModelDocument & single_model(Session & s, const std::string & file, const ModelDocument & doc, const std::string & name)
{
  if (doc.kind == ModelKind::Vdfm || !name.empty()) {
    if (doc.kind != ModelKind::Vdfm && doc.name == name) {
      return doc;
    }
    return pick(s, file, doc, name);
  }
  return doc;
}

int cmd_schema(Session & s, const std::string & file, const std::string & format, const std::string & out_file, const std::string & sub)
{
  const ModelDocument container = s.model(file);
  const ModelDocument & doc = single_model(s, file, container, sub);
  if (doc.kind != ModelKind::Vifm) {
    s.fail(file, "WrongInput", "schema generation needs a VIFM, got " + std::string(to_string(doc.kind)) + " " + doc.name);
    return kUsage;
  }
  if (!s.report(file, validate(doc))) {
    return kFailure;
  }
  std::string text;
  try {
    const auto ids = emit_ids(doc);
    text = format == "sql" ? emit_sql(ids) : render_ids(ids);
  } catch (const Error & e) {
    s.fail(file, e.code(), e.what(), e.span());
    return kFailure;
  }
  if (out_file.empty()) {
    s.out() << text;
  } else {
    s.write(out_file, text);
  }
  return kOk;
}

int cmd_enumerate(Session & s, const std::string & file, bool count_only, std::size_t max, const std::string & sub)
{
  const ModelDocument container = s.model(file);
  const ModelDocument & doc = single_model(s, file, container, sub);
  if (doc.kind == ModelKind::Vdfm) {
    s.fail(file, "WrongInput", "enumerate needs a single model");
    return kUsage;
  }
  try {
    const auto graph = build_constraint_graph(doc);
    if (count_only) {
      s.out() << count_configurations(graph, max) << "\n";
      return kOk;
    }
    const auto configs = enumerate_configurations(graph, max);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (i > 0) {
        s.out() << "\n";
      }
      for (const auto & p : ordered(graph, configs[i])) {
        s.out() << p.str() << "\n";
      }
    }
  } catch (const NotValidated & e) {
    s.report(file, e.report());
    return kFailure;
  } catch (const TooLarge & e) {
    s.fail(file, e.code(), e.what());
    return kUsage;
  }
  return kOk;
}

int cmd_fmt(Session & s, const std::vector<std::string> & files, bool check_only)
{
  int status = kOk;
  for (const auto & file : files) {
    try {
      const std::string src = s.read(file);
      const ModelDocument doc = s.model(file);
      const std::string canonical = pretty_print(doc);
      if (canonical == src) {
        continue;
      }
      if (check_only) {
        s.err() << file << ": not in canonical form\n";
        status = std::max(status, static_cast<int>(kFailure));
      } else {
        s.write(file, canonical);
      }
    } catch (const Stop & stop) {
      status = std::max(status, stop.code);
    }
  }
  return status;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Variable data feature models: check, derive, schema, enumerate, fmt"};
  app.name("vdfm");
  app.require_subcommand(1);

  std::vector<std::string> files;
  bool json_flag = false;
  auto * check = app.add_subcommand("check", "parse and validate models and selection programs");
  check->add_option("files", files, "model (.vdfm) or program (.vsel) files")->required();
  check->add_flag("--json", json_flag, "print diagnostics as a JSON array on stdout");

  std::string model_file;
  std::string program_file;
  std::string out_dir;
  bool explain_flag = false;
  auto * derive_cmd = app.add_subcommand("derive", "run a selection program against a model");
  derive_cmd->add_option("model", model_file, "input VCFM/VLFM (or VDFM container)")->required();
  derive_cmd->add_option("program", program_file, "selection program (.vsel)")->required();
  derive_cmd->add_option("--out", out_dir, "directory for <output>.vdfm (default: current)");
  derive_cmd->add_flag("--explain", explain_flag, "print why each implicit feature was selected");

  std::string format = "ids";
  std::string out_file;
  std::string sub_model;
  auto * schema = app.add_subcommand("schema", "emit the instance data schema of a VIFM");
  schema->add_option("file", model_file, "VIFM file")->required();
  schema->add_option("--format", format, "ids or sql")->check(CLI::IsMember({"ids", "sql"}));
  schema->add_option("--out", out_file, "write to FILE instead of stdout");
  schema->add_option("--model", sub_model, "sub-model to use inside a VDFM container");

  bool count_flag = false;
  std::size_t max = kDefaultEnumerationCap;
  auto * enumerate = app.add_subcommand("enumerate", "list every valid configuration (brute force)");
  enumerate->add_option("file", model_file, "model file")->required();
  enumerate->add_flag("--count", count_flag, "print only the number of configurations");
  enumerate->add_option("--max", max, "refuse models with more selectable features")->check(CLI::Range(0, 30));
  enumerate->add_option("--model", sub_model, "sub-model to use inside a VDFM container");

  bool check_flag = false;
  auto * fmt = app.add_subcommand("fmt", "rewrite models in canonical form");
  fmt->add_option("files", files, "model files")->required();
  fmt->add_flag("--check", check_flag, "only report files that are not canonical");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Session s(out, err);
  try {
    if (*check) return cmd_check(s, files, json_flag);
    if (*derive_cmd) return cmd_derive(s, model_file, program_file, out_dir, explain_flag);
    if (*schema) return cmd_schema(s, model_file, format, out_file, sub_model);
    if (*enumerate) return cmd_enumerate(s, model_file, count_flag, max, sub_model);
    if (*fmt) return cmd_fmt(s, files, check_flag);
  } catch (const Stop & stop) {
    return stop.code;
  } catch (const std::exception & e) {
    err << "vdfm: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace vdfm::cli
