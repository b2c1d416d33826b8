#include "grfhomog/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "grfhomog/errors.hpp"

namespace grfhomog {

double parse_fraction(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1));
      if (den == 0.0) throw ParseError("fraction with zero denominator: " + s);
      return num / den;
    } catch (const std::invalid_argument&) {
      throw ParseError("not a number or fraction: " + s);
    }
  }
  throw ParseError("expected a number or a \"p/q\" string");
}

LieAlgebra lie_algebra_from_json(const nlohmann::json& j) {
  if (!j.contains("dim") || !j.contains("C"))
    throw ParseError("algebra document needs \"dim\" and \"C\"");
  const int n = j.at("dim").get<int>();
  const auto& c = j.at("C");
  if (static_cast<int>(c.size()) != n)
    throw ParseError("\"C\" is not a dense dim^3 array");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n * n);
  for (const auto& plane : c) {
    if (static_cast<int>(plane.size()) != n)
      throw ParseError("\"C\" is not a dense dim^3 array");
    for (const auto& row : plane) {
      if (static_cast<int>(row.size()) != n)
        throw ParseError("\"C\" is not a dense dim^3 array");
      for (const auto& entry : row) flat.push_back(parse_fraction(entry));
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return LieAlgebra(n, std::move(flat), std::move(labels));
}

nlohmann::json lie_algebra_to_json(const LieAlgebra& l) {
  const int n = l.dim();
  nlohmann::json c = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json plane = nlohmann::json::array();
    for (int j = 0; j < n; ++j) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < n; ++k) row.push_back(l.c(i, j, k));
      plane.push_back(std::move(row));
    }
    c.push_back(std::move(plane));
  }
  nlohmann::json out;
  out["dim"] = n;
  out["C"] = std::move(c);
  if (!l.labels().empty()) out["labels"] = l.labels();
  return out;
}

AltForm alt_form_from_json(const nlohmann::json& j, int n) {
  if (!j.contains("degree")) throw ParseError("form document needs \"degree\"");
  const int k = j.at("degree").get<int>();
  std::vector<std::pair<std::vector<int>, double>> terms;
  if (j.contains("terms")) {
    for (const auto& term : j.at("terms")) {
      std::vector<int> idx = term.at("idx").get<std::vector<int>>();
      for (int& i : idx) {
        if (i < 1 || i > n) throw ParseError("form index out of range");
        i -= 1;
      }
      terms.emplace_back(std::move(idx), parse_fraction(term.at("val")));
    }
  }
  return AltForm::from_terms(n, k, terms);
}

nlohmann::json alt_form_to_json(const AltForm& a) {
  nlohmann::json terms = nlohmann::json::array();
  const auto& tuples = a.tuples();
  for (int r = 0; r < a.size(); ++r) {
    if (a.coeff(r) == 0.0) continue;
    nlohmann::json term;
    std::vector<int> idx = tuples[r];
    for (int& i : idx) i += 1;
    term["idx"] = idx;
    term["val"] = a.coeff(r);
    terms.push_back(std::move(term));
  }
  nlohmann::json out;
  out["degree"] = a.degree();
  out["terms"] = std::move(terms);
  return out;
}

Mat matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw ParseError("matrix document is empty");
  const int cols = static_cast<int>(j.at(0).size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols)
      throw ParseError("matrix rows have unequal lengths");
    for (int c = 0; c < cols; ++c) m(r, c) = parse_fraction(j.at(r).at(c));
  }
  return m;
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

KobayashiData kobayashi_data_from_json(const nlohmann::json& j) {
  const Mat g0 = matrix_from_json(j.at("g0"));
  const int n = static_cast<int>(g0.rows());
  return KobayashiData{Metric(g0),
                       matrix_from_json(j.at("ric0")),
                       alt_form_from_json(j.at("alpha"), n),
                       alt_form_from_json(j.at("beta"), n),
                       parse_fraction(j.at("lambda")),
                       parse_fraction(j.at("mu"))};
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

// Minimal writer so every float goes through fmt_double.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    comma();
    out_ += '"';
    out_ += name;
    out_ += "\": ";
    pending_value_ = true;
  }

  void value(double x) { raw(fmt_double(x)); }
  void value(int x) { raw(std::to_string(x)); }
  void value(bool x) { raw(x ? "true" : "false"); }
  void value(const std::string& x) { raw('"' + x + '"'); }
  void value_raw(const std::string& x) { raw(x); }

  void vector(const Vec& v) {
    begin_array();
    for (int i = 0; i < v.size(); ++i) value(v[i]);
    end_array();
  }

  void matrix(const Mat& m) {
    begin_array();
    for (int r = 0; r < m.rows(); ++r) {
      begin_array();
      for (int c = 0; c < m.cols(); ++c) value(m(r, c));
      end_array();
    }
    end_array();
  }

 private:
  void open(char c) {
    comma();
    out_ += c;
    first_.push_back(true);
    pending_value_ = false;
  }
  void close(char c) {
    out_ += c;
    first_.pop_back();
  }
  void comma() {
    if (pending_value_) return;
    if (!first_.empty()) {
      if (!first_.back()) out_ += ", ";
      first_.back() = false;
    }
  }
  void raw(const std::string& s) {
    comma();
    out_ += s;
    pending_value_ = false;
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::left_domain: return "left_domain";
    case SolveStatus::stalled: return "stalled";
  }
  return "unknown";
}

void emit_form(JsonWriter& w, const AltForm& a) {
  w.begin_object();
  w.key("degree");
  w.value(a.degree());
  w.key("terms");
  w.begin_array();
  const auto& tuples = a.tuples();
  for (int r = 0; r < a.size(); ++r) {
    if (a.coeff(r) == 0.0) continue;
    w.begin_object();
    w.key("idx");
    w.begin_array();
    for (int i : tuples[r]) w.value(i + 1);
    w.end_array();
    w.key("val");
    w.value(a.coeff(r));
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void emit_solve_report(JsonWriter& w, const SolveReport& report, const Chart& chart) {
  w.begin_object();
  w.key("param_names");
  w.begin_array();
  for (const auto& name : chart.param_names) w.value(name);
  w.end_array();
  w.key("params");
  w.vector(report.params);
  w.key("raw_params");
  w.vector(report.raw_params);
  w.key("residual_norm");
  w.value(report.residual_norm);
  w.key("iterations");
  w.value(report.iterations);
  w.key("converged");
  w.value(report.converged);
  w.key("status");
  w.value(std::string(status_name(report.status)));
  w.key("jacobian_rank");
  w.value(report.jacobian_rank);
  w.key("singular_values");
  w.vector(report.singular_values);
  if (report.converged) {
    const auto [g, h] = chart.eval(report.params);
    w.key("metric");
    w.matrix(g.components());
    w.key("torsion");
    emit_form(w, h);
  }
  w.end_object();
}

}  // namespace

std::string solve_report_json(const SolveReport& report, const Chart& chart) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("report");
  emit_solve_report(w, report, chart);
  w.end_object();
  return w.str() + "\n";
}

std::string multistart_report_json(const std::vector<SolveReport>& reports,
                                   const Chart& chart) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("count");
  w.value(static_cast<int>(reports.size()));
  int converged = 0;
  for (const auto& r : reports) converged += r.converged ? 1 : 0;
  w.key("converged_count");
  w.value(converged);
  w.key("reports");
  w.begin_array();
  for (const auto& r : reports) emit_solve_report(w, r, chart);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string stability_json(const JacobianReport& report, const Eigen::Vector3d& fixed_point,
                           int p, int q, double lambda) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("p");
  w.value(p);
  w.key("q");
  w.value(q);
  w.key("lambda");
  w.value(lambda);
  w.key("fixed_point");
  w.begin_array();
  for (int i = 0; i < 3; ++i) w.value(fixed_point[i]);
  w.end_array();
  w.key("jacobian");
  w.matrix(report.jacobian);
  w.key("eigenvalues");
  w.begin_array();
  for (int i = 0; i < report.eigenvalues.size(); ++i) {
    w.begin_object();
    w.key("re");
    w.value(report.eigenvalues[i].real());
    w.key("im");
    w.value(report.eigenvalues[i].imag());
    w.end_object();
  }
  w.end_array();
  w.key("asymptotically_stable");
  w.value(report.asymptotically_stable);
  w.end_object();
  return w.str() + "\n";
}

std::string kobayashi_report_json(const KobayashiReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("ok");
  w.value(report.ok);
  if (!report.ok) {
    w.key("violated");
    w.value(std::string(1, report.violated));
    w.key("defect");
    w.value(report.defect);
  } else {
    w.key("c");
    w.value(report.c);
    w.key("h");
    w.value(report.h);
    w.key("eq1_defect");
    w.value(report.eq1_defect);
    w.key("eq2_defect");
    w.value(report.eq2_defect);
  }
  w.end_object();
  return w.str() + "\n";
}

std::string catalog_space_json(const MpqSpace& space) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("name");
  w.value("mpq(" + std::to_string(space.p()) + "," + std::to_string(space.q()) + ")");
  w.key("p");
  w.value(space.p());
  w.key("q");
  w.value(space.q());

  const LieAlgebra& algebra = space.space().algebra();
  w.key("algebra");
  w.begin_object();
  w.key("dim");
  w.value(algebra.dim());
  w.key("labels");
  w.begin_array();
  for (const auto& label : algebra.labels()) w.value(label);
  w.end_array();
  w.key("C");
  w.begin_array();
  for (int i = 0; i < algebra.dim(); ++i) {
    w.begin_array();
    for (int j = 0; j < algebra.dim(); ++j) {
      w.begin_array();
      for (int k = 0; k < algebra.dim(); ++k) w.value(algebra.c(i, j, k));
      w.end_array();
    }
    w.end_array();
  }
  w.end_array();
  w.end_object();

  w.key("killing");
  w.matrix(killing_form(algebra));
  w.key("isotropy_indices");
  w.begin_array();
  for (int i : space.space().isotropy_indices()) w.value(i + 1);
  w.end_array();
  w.key("m_indices");
  w.begin_array();
  for (int i : space.space().m_indices()) w.value(i + 1);
  w.end_array();

  const Chart chart = space.brf_chart();
  w.key("brf_chart");
  w.begin_object();
  w.key("param_names");
  w.begin_array();
  for (const auto& name : chart.param_names) w.value(name);
  w.end_array();
  w.key("solution");
  w.vector(space.brf_solution_params());
  w.end_object();

  const FlowChart flow = space.flow_chart();
  w.key("flow_chart");
  w.begin_object();
  w.key("metric_param_names");
  w.begin_array();
  for (const auto& name : flow.metric_param_names) w.value(name);
  w.end_array();
  w.key("b_dim");
  w.value(flow.b_dim());
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << contents;
}

}  // namespace grfhomog
