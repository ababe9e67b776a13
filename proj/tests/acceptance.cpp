// Runs the twelve acceptance experiments; one line per row, exit 1 on any FAIL.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "qclab/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qclab acceptance matrix"};
  qclab::SuiteOptions o;
  bool details = false;
  std::vector<int> only;
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--budget", o.budget, "checker budget");
  app.add_option("--row", only, "run only these rows (1-11)");
  app.add_flag("--details", details, "print the measurements under each row");
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  const auto progress = [&](const std::string& what) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "[" << s << "s] " << what << "\n";
  };
  std::vector<qclab::AcceptanceRow> rows;
  try {
    if (only.empty()) {
      rows = qclab::run_acceptance(o, progress);
    } else {
      for (int id : only) rows.push_back(qclab::run_acceptance_row(id, o));
    }
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  qclab::write_rows(std::cout, rows, details);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.pass;
  std::cout << (ok ? "all acceptance criteria pass" : "acceptance FAILED") << "\n";
  return ok ? 0 : 1;
}
