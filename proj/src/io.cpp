#include "nicd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace nicd {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw NicdError(ErrorCode::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* name) {
  require(j.is_object() && j.contains(name), ErrorCode::MalformedInput, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw NicdError(ErrorCode::MalformedInput, std::string("field '") + name + "': " + e.what());
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// JSON has no infinities; emit them as strings so the output stays valid.
json number_json(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::MalformedInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceFile parse_instance(const std::string& text, bool allow_unbalanced) {
  const json j = parse_json(text);
  const int n = field<int>(j, "n");
  const double rho = field<double>(j, "rho");
  const auto pairs = field<std::vector<std::vector<int>>>(j, "edges");
  const auto players = field<std::vector<int>>(j, "players");
  std::vector<Edge> edges;
  int vertices = 1;
  for (const auto& p : pairs) {
    require(p.size() == 2, ErrorCode::MalformedInput, "each edge must be a [u, v] pair");
    edges.push_back({p[0], p[1]});
    vertices = std::max({vertices, p[0] + 1, p[1] + 1});
  }
  for (int v : players) vertices = std::max(vertices, v + 1);
  NicdInstance inst(vertices, std::move(edges), CorrelationParam(rho), n, players);

  std::optional<Protocol> prot;
  if (j.contains("protocol") && !j.at("protocol").is_null()) {
    const json& pj = j.at("protocol");
    if (pj.is_string()) {
      prot = Protocol::simple(inst.players(), BooleanFunction::parse(pj.get<std::string>(), n), allow_unbalanced);
    } else {
      require(pj.is_object(), ErrorCode::MalformedInput, "protocol must be a string or a vertex -> function map");
      std::map<int, BooleanFunction> fns;
      for (const auto& [key, value] : pj.items()) {
        int v = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), v);
        require(res.ec == std::errc() && res.ptr == key.data() + key.size(), ErrorCode::MalformedInput,
                "protocol key '" + key + "' is not a vertex id");
        require(value.is_string(), ErrorCode::MalformedInput, "protocol values must be function encodings");
        fns.emplace(v, BooleanFunction::parse(value.get<std::string>(), n));
      }
      prot = Protocol(std::move(fns), allow_unbalanced);
    }
  }
  return InstanceFile{std::move(inst), std::move(prot)};
}

InstanceFile load_instance(const std::string& path, bool allow_unbalanced) {
  return parse_instance(read_text_file(path), allow_unbalanced);
}

ReversibleChain parse_chain(const std::string& text) {
  const json j = parse_json(text);
  const int size = field<int>(j, "size");
  auto rows = field<std::vector<std::vector<double>>>(j, "rows");
  require(static_cast<int>(rows.size()) == size, ErrorCode::MalformedInput, "rows do not match size");
  std::optional<std::vector<double>> pi;
  if (j.contains("pi") && !j.at("pi").is_null()) pi = field<std::vector<double>>(j, "pi");
  return ReversibleChain(std::move(rows), std::move(pi));
}

ReversibleChain load_chain(const std::string& path) { return parse_chain(read_text_file(path)); }

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_fixed17(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw NicdError(ErrorCode::MalformedInput, "format must be json or csv");
}

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    out << "instance,protocol,success,bound,note\n";
    for (const auto& r : rows) {
      out << csv_cell(r.instance) << ',' << csv_cell(r.protocol) << ',' << format_fixed17(r.success) << ','
          << (r.bound ? format_fixed17(*r.bound) : "") << ',' << csv_cell(r.note) << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    o["instance"] = r.instance;
    o["protocol"] = r.protocol;
    o["success"] = number_json(r.success);
    o["bound"] = r.bound ? number_json(*r.bound) : json(nullptr);
    o["note"] = r.note;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_fixed17(row[i]);
      out << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& row : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < header.size() && i < row.size(); ++i) o[header[i]] = number_json(row[i]);
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

std::string check_report_json(const CheckReport& r) {
  json o;
  o["name"] = r.name;
  o["trials"] = r.trials;
  o["worst_slack"] = number_json(r.worst_slack);
  o["witness"] = r.witness;
  o["passed"] = r.passed;
  o["tolerance"] = r.tolerance;
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = number_json(v);
  o["details"] = std::move(details);
  return o.dump(2);
}

}  // namespace nicd
