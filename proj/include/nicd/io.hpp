#pragma once

// File formats and report emission.
//
// Instance file:
//   {"n": 3, "rho": 0.5, "edges": [[0,1],[1,2]], "players": [0,2],
//    "protocol": {"0": "dict:1", "2": "maj:3"}}
// "protocol" is optional; a single string applies one function to every
// player. Chain file:
//   {"size": 2, "rows": [[0.75,0.25],[0.25,0.75]], "pi": [0.5,0.5]}
// with "pi" optional (derived from detailed balance when absent).

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nicd/markov.hpp"
#include "nicd/tree_nicd.hpp"
#include "nicd/verify.hpp"

namespace nicd {

struct InstanceFile {
  NicdInstance instance;
  std::optional<Protocol> protocol;
};

InstanceFile parse_instance(const std::string& text, bool allow_unbalanced = false);
InstanceFile load_instance(const std::string& path, bool allow_unbalanced = false);

ReversibleChain parse_chain(const std::string& text);
ReversibleChain load_chain(const std::string& path);

/// Shortest text that round-trips (JSON numbers).
std::string format_number(double x);
/// 17 significant digits, '.' separator, no locale (CSV cells).
std::string format_fixed17(double x);

enum class OutputFormat { Json, Csv };

OutputFormat parse_format(const std::string& name);

/// One row of an evaluation/search report; CSV columns are
/// instance,protocol,success,bound,note in that order.
struct ReportRow {
  std::string instance;
  std::string protocol;
  double success = 0.0;
  std::optional<double> bound;
  std::string note;
};

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, OutputFormat format);

/// Generic table: header plus numeric rows; JSON output is an array of
/// objects keyed by the header.
void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows, OutputFormat format);

std::string check_report_json(const CheckReport& report);

std::string read_text_file(const std::string& path);

}  // namespace nicd
