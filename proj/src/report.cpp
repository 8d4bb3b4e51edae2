#include "torich/report.hpp"

#include <sstream>

#include "json.hpp"
#include "torich/error.hpp"

namespace torich {

namespace {

using nlohmann::json;

json certificate_json(const WeightCertificate& c) {
  return {{"radius", c.radius},   {"confirmed_radius", c.confirmed_radius}, {"doublings", c.doublings},
          {"explicit_box", c.explicit_box}, {"visited", c.visited},     {"support", c.support}};
}

WeightCertificate certificate_from(const json& j) {
  WeightCertificate c;
  c.radius = j.at("radius").get<Int>();
  c.confirmed_radius = j.at("confirmed_radius").get<Int>();
  c.doublings = j.at("doublings").get<std::size_t>();
  c.explicit_box = j.at("explicit_box").get<bool>();
  c.visited = j.at("visited").get<std::size_t>();
  c.support = j.at("support").get<std::size_t>();
  return c;
}

Verdict verdict_from(const std::string& s) {
  if (s == "PASS") return Verdict::kPass;
  if (s == "FAIL") return Verdict::kFail;
  if (s == "SKIP") return Verdict::kSkip;
  throw Error(ErrorCode::kParse, "unknown verdict " + s);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string flatten(const std::vector<std::vector<Int>>& table) {
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (r) out += '|';
    for (std::size_t c = 0; c < table[r].size(); ++c) out += (c ? ";" : "") + std::to_string(table[r][c]);
  }
  return out;
}

std::string label(const TaskResult& t) {
  std::string s = t.theorem + " " + t.sheaf;
  if (!t.bundle.empty()) s += " (x) " + t.bundle;
  return s + " [" + t.field + "]";
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkip: return "SKIP";
  }
  return "FAIL";
}

bool Report::any_fail() const {
  for (const auto& t : tasks)
    if (t.verdict == Verdict::kFail) return true;
  return false;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "text") return ReportFormat::kText;
  throw Error(ErrorCode::kParse, "unknown report format " + std::string(name));
}

std::string emit_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json tasks = json::array();
    for (const auto& t : report.tasks) {
      json j = {{"theorem", t.theorem}, {"sheaf", t.sheaf},   {"bundle", t.bundle},
                {"field", t.field},     {"witness", t.witness}, {"verdict", verdict_name(t.verdict)},
                {"tables", t.tables},   {"values", t.values}};
      j["certificate"] = t.certificate ? certificate_json(*t.certificate) : json(nullptr);
      tasks.push_back(std::move(j));
    }
    json root = {{"scene", report.scene}, {"digest", report.digest}, {"suite", report.suite}, {"tasks", tasks}};
    return root.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "suite,theorem,sheaf,bundle,field,verdict,tables,values,witness\n";
    for (const auto& t : report.tasks) {
      std::string tables, values;
      for (const auto& [k, v] : t.tables) tables += (tables.empty() ? "" : " ") + k + "=" + flatten(v);
      for (const auto& [k, v] : t.values) values += (values.empty() ? "" : " ") + k + "=" + std::to_string(v);
      out << csv_quote(report.suite) << ',' << csv_quote(t.theorem) << ',' << csv_quote(t.sheaf) << ','
          << csv_quote(t.bundle) << ',' << csv_quote(t.field) << ',' << verdict_name(t.verdict) << ','
          << csv_quote(tables) << ',' << csv_quote(values) << ',' << csv_quote(t.witness) << '\n';
    }
    return out.str();
  }
  std::size_t pass = 0, fail = 0, skip = 0;
  out << "suite " << report.suite << " on " << report.scene << " (" << report.digest << ")\n";
  for (const auto& t : report.tasks) {
    out << verdict_name(t.verdict) << ' ' << label(t);
    if (t.verdict != Verdict::kPass && !t.witness.empty()) out << ": " << t.witness;
    out << '\n';
    (t.verdict == Verdict::kPass ? pass : t.verdict == Verdict::kFail ? fail : skip)++;
  }
  out << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
  return out.str();
}

Report parse_report_json(std::string_view text) {
  try {
    const json root = json::parse(text);
    Report r;
    r.scene = root.at("scene").get<std::string>();
    r.digest = root.at("digest").get<std::string>();
    r.suite = root.at("suite").get<std::string>();
    for (const auto& j : root.at("tasks")) {
      TaskResult t;
      t.theorem = j.at("theorem").get<std::string>();
      t.sheaf = j.at("sheaf").get<std::string>();
      t.bundle = j.at("bundle").get<std::string>();
      t.field = j.at("field").get<std::string>();
      t.witness = j.at("witness").get<std::string>();
      t.verdict = verdict_from(j.at("verdict").get<std::string>());
      t.tables = j.at("tables").get<std::map<std::string, std::vector<std::vector<Int>>>>();
      t.values = j.at("values").get<std::map<std::string, Int>>();
      if (!j.at("certificate").is_null()) t.certificate = certificate_from(j.at("certificate"));
      r.tasks.push_back(std::move(t));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed report: ") + e.what());
  }
}

}  // namespace torich
