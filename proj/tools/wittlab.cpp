// wittlab: batch front end.
//
//   wittlab eval [--batch] [--no-timing] [REQUEST]   JSON request(s) -> JSON response(s)
//   wittlab selftest --profile small|full          acceptance report as JSON
//
// Exit status: 0 ok, 1 failed check, 2 usage error, 3 precision exhausted.

#include "wittlab/eval.hpp"
#include "wittlab/selftest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

using wittlab::eval::Json;
using wittlab::eval::Response;

void emit(Response& r, bool timing) {
  if (!timing) r.body.erase("elapsed_ms");
  std::cout << r.body.dump() << '\n';
}

int run_eval(const wittlab::PrecisionCtx& ctx, bool batch, bool timing, const std::string& inline_request) {
  if (!batch) {
    std::string text = inline_request;
    if (text.empty()) text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    Response r = wittlab::eval::evaluate_text(text, ctx);
    emit(r, timing);
    return r.exit_code;
  }
  // NDJSON: one response line per non-blank request line; the exit status
  // is the largest seen.
  int status = 0;
  std::string line;
  std::istringstream given(inline_request);
  std::istream& in = inline_request.empty() ? std::cin : given;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Response r = wittlab::eval::evaluate_text(line, ctx);
    emit(r, timing);
    status = std::max(status, r.exit_code);
  }
  return status;
}

int run_selftest(const std::string& profile, const std::vector<int>& only, bool serial) {
  const auto results = wittlab::run_selftest(wittlab::Profile::named(profile), !serial, only);
  Json criteria = Json::array();
  bool all = true;
  for (const auto& r : results) {
    criteria.push_back({{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"effective_precision", r.effective_precision > 0 ? Json(r.effective_precision) : Json("exact")},
                        {"checks", r.checks},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
    all = all && r.passed;
  }
  std::cout << Json{{"profile", profile}, {"passed", all}, {"criteria", criteria}}.dump(2) << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witt vectors, the tilt, theta maps and the TR model"};
  app.require_subcommand(1);

  wittlab::PrecisionCtx ctx;
  app.add_option("--p", ctx.p, "odd prime")->capture_default_str();
  app.add_option("--prec", ctx.N, "p-adic precision N")->capture_default_str();
  app.add_option("--depth", ctx.D, "maximal cyclotomic depth D")->capture_default_str();
  app.add_option("--len", ctx.L, "maximal Witt length L")->capture_default_str();
  app.add_option("--guard", ctx.G, "guard digits G for ghost inversion")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "evaluate JSON requests from stdin or the argument");
  bool batch = false, no_timing = false;
  std::string request;
  eval->add_flag("--batch", batch, "read NDJSON, one request per line");
  eval->add_flag("--no-timing", no_timing, "omit elapsed_ms from responses");
  eval->add_option("request", request, "request JSON (default: read stdin)");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  std::string profile = "small";
  std::vector<int> only;
  bool serial = false;
  selftest->add_option("--profile", profile, "small or full")->check(CLI::IsMember({"small", "full"}))->capture_default_str();
  selftest->add_option("--only", only, "criterion ids to run");
  selftest->add_flag("--serial", serial, "run criteria one after another");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ctx.validate();
  } catch (const wittlab::Error& e) {
    Response r = wittlab::eval::error_response("", wittlab::to_string(e.code()), e.what());
    emit(r, false);
    return 2;
  }

  if (eval->parsed()) return run_eval(ctx, batch, !no_timing, request);
  return run_selftest(profile, only, serial);
}
