// Verification report: one entry per checked claim, assembled per machine
// family, printable as a table or as deterministic JSON.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpm/grover.hpp"

namespace qpm::report {

struct Entry {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // |expected - observed| <= tolerance
  std::string paper_anchor;
};

Entry make_entry(std::string name, std::string anchor, double expected, double observed,
                 double tolerance);

struct Options {
  std::uint64_t seed = 0;
  long long trials = 100000;
  int n = 16;             // program dimension for the shift-group checks
  double theta = 0.3;     // target angle for the focused grid checks
  double alpha = 0.7;     // phase-gate angle for the sampled runs
  double overlap = 0.5;   // candidate-pair overlap for the focused checks
  std::string group_file; // optional Cayley table for the conjugacy instance
  int g1 = 1;
  int g2 = 2;
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  long long trials = 0;
  std::vector<Entry> entries;
  std::vector<std::string> notes;  // extra human-readable lines (witnesses etc.)
  double wall_seconds = 0.0;       // table output only, never serialized

  bool all_pass() const;
};

// Entry builders, one per machine family.  Each derives its random streams
// from Options::seed alone, so rebuilding with equal options is bit-stable.
std::vector<Entry> clone_entries(const Options& opt);
std::vector<Entry> discrimination_entries(const Options& opt);
std::vector<Entry> channel_entries(const Options& opt);
std::vector<Entry> a_gate_entries(const Options& opt);
std::vector<Entry> procfid_entries(const Options& opt);
std::vector<Entry> phase_gate_entries(const Options& opt);
std::vector<Entry> progdisc_entries(const Options& opt);
std::vector<Entry> grover_entries(const Options& opt, std::vector<std::string>* notes);

// Built-in Cayley tables for the conjugacy demonstrations.
grover::GroupTable symmetric_group_3();
grover::GroupTable dihedral_group_4();

// `command` is one of: clone, discriminate, channels, a-gate, procfid,
// phase-gate, progdisc, grover, report-all.  report-all additionally
// rebuilds every entry a second time and checks the serialized bytes agree.
Report build_report(const std::string& command, const Options& opt);

// {"seed":...,"trials":...,"all_pass":...,"entries":[...]} with reals at 15
// significant digits; byte-stable for equal inputs.
std::string to_json(const Report& report);

void print_table(const Report& report, std::ostream& out);

}  // namespace qpm::report
