// Command-line harness: runs each machine family, prints a verification
// table (or JSON with --json), and exits 0 only when every check passes.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qpm/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"programmable quantum machine simulator and verification harness"};
  app.require_subcommand(1);

  qpm::report::Options opt;
  bool json = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "random seed (default 0)");
    sub->add_option("--trials", opt.trials, "Monte Carlo trials per sampled check (default 100000)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--json", json, "emit the verification report as JSON");
    return sub;
  };

  add_common(app.add_subcommand("clone", "splitting circuit, anticlone, exact-or-fail cloning"));
  add_common(app.add_subcommand("discriminate", "minimum-error and unambiguous discrimination"))
      ->add_option("--overlap", opt.overlap, "candidate-pair overlap for the focused checks")
      ->check(CLI::Range(0.0, 1.0));
  add_common(app.add_subcommand("channels", "Bell-program channels on the cloning processor"));
  add_common(app.add_subcommand("a-gate", "probabilistic phase flip about a programmed state"));
  {
    CLI::App* sub = add_common(app.add_subcommand("procfid", "process fidelity and the shift-group processor"));
    sub->add_option("--n", opt.n, "program dimension for the focused grid check")->check(CLI::Range(2, 1024));
    sub->add_option("--theta", opt.theta, "target angle for the focused grid check");
  }
  add_common(app.add_subcommand("phase-gate", "probabilistic phase-rotation processors"))
      ->add_option("--alpha", opt.alpha, "rotation angle for the sampled runs");
  add_common(app.add_subcommand("progdisc", "programmable unambiguous discriminator"));
  {
    CLI::App* sub = add_common(app.add_subcommand("grover", "program-register search and conjugacy instances"));
    sub->add_option("--group-file", opt.group_file, "Cayley table file for an extra conjugacy instance");
    sub->add_option("--g1", opt.g1, "first group element index");
    sub->add_option("--g2", opt.g2, "second group element index");
  }
  {
    CLI::App* sub = add_common(app.add_subcommand("report-all", "every check, plus a determinism self-test"));
    sub->add_option("--overlap", opt.overlap, "candidate-pair overlap")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--n", opt.n, "program dimension")->check(CLI::Range(2, 1024));
    sub->add_option("--theta", opt.theta, "grid target angle");
    sub->add_option("--alpha", opt.alpha, "phase-gate angle");
    sub->add_option("--group-file", opt.group_file, "Cayley table file");
    sub->add_option("--g1", opt.g1, "first group element index");
    sub->add_option("--g2", opt.g2, "second group element index");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    qpm::report::Report report =
        qpm::report::build_report(app.get_subcommands().front()->get_name(), opt);
    if (json) {
      std::cout << qpm::report::to_json(report);
    } else {
      qpm::report::print_table(report, std::cout);
    }
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
