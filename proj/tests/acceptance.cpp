// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "properties.hpp"
#include "vdfm/cli.hpp"
#include "vdfm/derive.hpp"
#include "vdfm/printer.hpp"

using namespace vdfm;
using namespace vdfm::testing;
namespace fs = std::filesystem;

namespace
{

// Seeds are fixed so that every run checks the same inputs.
constexpr std::uint64_t kSeed = 20240611;

// Instance schema of the worked example, `constraint` spelled out on every key.
const std::string kExpectedIds =
  "Student (St-Name string, St-Avg float, St-mail string, St-Pone number, St-Nat-Id-Pk constraint, Co-Id-Fk constraint)\n"
  "Course (Co-Name string, Co-Hour string, Co-Nb-Pk constraint)\n";

struct Outcome
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string & name, const std::function<Outcome()> & run)
{
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    o = run();
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) {
    ++failures;
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f s", s);
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << secs << ")"
            << std::endl;
}

std::string summary(const PropertyResult & r)
{
  std::string s = std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures";
  if (!r.samples.empty()) {
    s += "; first: " + r.samples.front().substr(0, r.samples.front().find('\n'));
  }
  return s;
}

std::string seconds(double s)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

int cli(std::vector<std::string> args, std::string * out = nullptr)
{
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) {
    *out = o.str();
  }
  return code;
}

Outcome example_chain()
{
  const fs::path dir = fs::temp_directory_path() / ("vdfm-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();
  std::string ids;
  const int c1 = cli({"check", corpus_path("student-course.vdfm")});
  const int c2 = cli({"derive", corpus_path("student-course.vdfm"), corpus_path("programs/StV1-CsV2.vsel"), "--out", dir.string()});
  const int c3 = cli({"derive", (dir / "StV1-CsV2.vdfm").string(), corpus_path("programs/StV1R2-CsV2R2.vsel"), "--out", dir.string()});
  const int c4 = cli({"schema", (dir / "StV1R2-CsV2R2.vdfm").string()}, &ids);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fs::remove_all(dir);
  const bool exits = c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0;
  const bool text = ids == kExpectedIds;
  return {
    exits && text && s < 1.0,
    std::string(text ? "IDS byte-equal to the expected two lines" : "IDS differs: " + ids) + ", exit codes " +
      std::to_string(c1) + std::to_string(c2) + std::to_string(c3) + std::to_string(c4) + ", pipeline " + seconds(s) +
      " (bound 1 s)"};
}

Outcome implication()
{
  const auto vlfm = derive_family(student_course(), family_program());
  const auto d = derive_instance_detailed(vlfm, instance_program());
  const FeaturePath exporter{"Course", "V2", "R2"};
  const FeaturePath importer{"Student", "V1-primary", "R2"};
  if (!d.configuration.contains(exporter)) {
    return {false, "Course>V2>R2 not selected"};
  }
  const auto & reason = d.configuration.reasons.at(exporter);
  const bool ok = reason.kind == ReasonKind::ImpliedBy && reason.cause == importer;
  return {ok, "Course>V2>R2: " + describe(reason)};
}

Outcome equivalence()
{
  const auto r = oracle_equivalence(kSeed, 200);
  return {r.passed() && r.seconds < 60.0, summary(r) + ", " + seconds(r.seconds) + " (bound 60 s)"};
}

Outcome closure()
{
  const auto r = closure_laws(kSeed, 200);
  return {r.passed(), "idempotence/monotonicity/minimality over 200 models: " + summary(r)};
}

Outcome replay()
{
  const auto laws = replay_laws(kSeed, 240);
  const auto det = replay_determinism(kSeed + 1, 240);
  return {laws.passed() && det.passed(), "prefix + inverse: " + summary(laws) + "; double-run determinism: " + summary(det)};
}

Outcome parser()
{
  const auto rt = round_trip(kSeed, 1000);
  const auto rb = parser_robustness(kSeed, 10000);
  return {rt.passed() && rb.passed(), "round trip (corpus + 1000 generated): " + summary(rt) + "; 10000 arbitrary inputs: " + summary(rb)};
}

Outcome derived()
{
  std::size_t produced = 0;
  auto r = derived_validity(kSeed, 200, &produced);
  const auto vlfm = derive_family(student_course(), family_program());
  const auto vifm = derive_instance(vlfm, instance_program());
  for (const auto * doc : {&vlfm, &vifm}) {
    ++r.cases;
    ++produced;
    if (!validate(*doc).ok() || !structurally_equal(parse_vdfm(pretty_print(*doc)), *doc)) {
      r.fail(doc->name + " is not valid or does not re-parse");
    }
  }
  return {r.passed() && produced > 0, std::to_string(produced) + " derived documents; " + summary(r)};
}

Outcome diagnostics()
{
  const std::regex header(R"(^// expect: (\S+) (\d+):(\d+))");
  std::set<std::string> exact;
  std::string problems;
  for (const auto & entry : fs::directory_iterator(corpus_path("diagnostics"))) {
    const std::string text = read_file(entry.path().string());
    std::smatch m;
    if (!std::regex_search(text, m, header)) {
      problems += " " + entry.path().filename().string() + "(no header)";
      continue;
    }
    const auto report = validate(parse_vdfm(text));
    const bool ok = report.diagnostics.size() == 1 && report.diagnostics[0].code == m[1] &&
                    report.diagnostics[0].span.line == std::stoi(m[2]) &&
                    report.diagnostics[0].span.column == std::stoi(m[3]);
    if (ok) {
      exact.insert(m[1]);
    } else {
      problems += " " + entry.path().filename().string();
    }
  }
  std::size_t missing = 0;
  for (const auto & code : diag::all_codes()) {
    if (!exact.contains(code)) {
      ++missing;
      problems += " missing:" + code;
    }
  }
  return {
    missing == 0 && problems.empty(),
    std::to_string(exact.size()) + "/" + std::to_string(diag::all_codes().size()) +
      " codes triggered exactly at their expected location" + (problems.empty() ? "" : ";" + problems)};
}

}  // namespace

int main()
{
  report(1, "worked-example chain", example_chain);
  report(2, "automatic implication", implication);
  report(3, "oracle equivalence", equivalence);
  report(4, "closure laws", closure);
  report(5, "replay laws", replay);
  report(6, "parser round-trip", parser);
  report(7, "derived-document validity", derived);
  report(8, "diagnostics precision", diagnostics);
  return failures == 0 ? 0 : 1;
}
