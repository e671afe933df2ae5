// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "wittlab/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"wittlab acceptance criteria"};
  std::string profile = "small";
  std::vector<int> only;
  bool serial = false;
  app.add_option("--profile", profile, "small or full")->check(CLI::IsMember({"small", "full"}));
  app.add_option("--only", only, "criterion ids to run");
  app.add_flag("--serial", serial, "run criteria one after another");
  CLI11_PARSE(app, argc, argv);

  const auto results = wittlab::run_selftest(wittlab::Profile::named(profile), !serial, only);
  int failed = 0;
  for (const auto& r : results) {
    const std::string prec = r.effective_precision > 0 ? "precision " + std::to_string(r.effective_precision) : "exact";
    std::printf("[%s] %2d %-36s %-12s %5d checks %6.1fs%s%s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                prec.c_str(), r.checks, r.seconds, r.passed ? "" : "  ", r.detail.c_str());
    failed += !r.passed;
  }
  std::printf("%d/%zu criteria passed (profile %s)\n", static_cast<int>(results.size()) - failed, results.size(),
              profile.c_str());
  return failed == 0 ? 0 : 1;
}
