#include "conik/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace conik {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  os_ << '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  os_ << '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma();
  os_ << '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  os_ << ']';
  first_.pop_back();
  return *this;
}

void JsonWriter::comma() {
  if (first_.empty()) return;
  if (first_.back()) {
    first_.back() = false;
  } else {
    os_ << ',';
  }
}

JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  os_ << '"' << k << "\":";
  if (!first_.empty()) first_.back() = true;  // suppress the next comma
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  os_ << format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  comma();
  os_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  comma();
  os_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  os_ << (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  comma();
  os_ << '"';
  for (char c : v) {
    switch (c) {
      case '"': os_ << "\\\""; break;
      case '\\': os_ << "\\\\"; break;
      case '\n': os_ << "\\n"; break;
      case '\t': os_ << "\\t"; break;
      default: os_ << c;
    }
  }
  os_ << '"';
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(const Vector& v) {
  begin_array();
  for (int i = 0; i < v.size(); ++i) value(v(i));
  end_array();
  return *this;
}

JsonWriter& JsonWriter::value(const Eigen::MatrixXd& M) {
  begin_array();
  for (int i = 0; i < M.rows(); ++i) {
    begin_array();
    for (int j = 0; j < M.cols(); ++j) value(M(i, j));
    end_array();
  }
  end_array();
  return *this;
}

void write_cone(JsonWriter& w, const Cone& cone) {
  w.begin_object();
  w.kv("kind", kind_name(cone.kind()));
  switch (cone.kind()) {
    case ConeKind::orthant:
      w.kv("n", cone.dim());
      break;
    case ConeKind::weighted_orthant:
      w.kv("weights", *cone.weight_vector());
      break;
    case ConeKind::psd:
      w.kv("m", cone.psd_side());
      break;
    case ConeKind::soc: {
      w.key("widths").begin_array();
      for (int p : *cone.soc_widths()) w.value(p);
      w.end_array();
      break;
    }
    case ConeKind::exp:
      w.kv("copies", cone.exp_copies());
      break;
    case ConeKind::lmi_slice: {
      w.kv("spec", cone.spec_string());
      w.kv("a0", *cone.lmi_a0());
      w.key("mats").begin_array();
      for (const auto& A : *cone.lmi_mats()) w.value(A);
      w.end_array();
      break;
    }
    case ConeKind::product: {
      w.key("parts").begin_array();
      for (const auto& p : *cone.parts()) write_cone(w, *p);
      w.end_array();
      break;
    }
  }
  w.end_object();
}

void write_program(JsonWriter& w, const ConicProgram& prog) {
  w.begin_object();
  w.kv("schema", "conik/v1");
  w.key("cone");
  write_cone(w, *prog.cone);
  w.kv("A", prog.A);
  w.kv("b", prog.b);
  w.kv("c", prog.c);
  w.kv("x0", prog.x0);
  w.kv("y0", prog.y0);
  w.kv("s0", prog.s0);
  w.end_object();
}

void write_certificate(JsonWriter& w, const WorstCaseCertificate& cert) {
  w.begin_object();
  w.kv("schema", "conik/v1");
  w.kv("valid", cert.valid);
  w.kv("v", cert.v);
  w.kv("x_hat", cert.x_hat);
  w.kv("r", cert.r);
  w.kv("u", cert.u);
  w.kv("t", cert.t);
  w.kv("ratio", cert.ratio);
  w.kv("xi_at_xhat", cert.xi_at_xhat);
  w.kv("v_norm_sq", cert.v_norm_sq);
  w.kv("xhat_radius", cert.xhat_radius);
  w.key("checks").begin_array();
  for (const auto& c : cert.checks) {
    w.begin_object();
    w.kv("clause", c.clause);
    w.kv("margin", c.margin);
    w.kv("pass", c.pass);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_trace_record(JsonWriter& w, const IterationRecord& rec) {
  w.begin_object();
  w.kv("k", rec.k);
  w.kv("mu", rec.mu);
  w.kv("gamma_g", rec.gamma_g);
  w.kv("gamma_inf", rec.gamma_inf);
  w.kv("xi_check", rec.xi_check);
  w.kv("step_predictor", rec.step_predictor);
  w.kv("correctors", rec.correctors);
  w.kv("membership_margin", rec.membership_margin);
  w.kv("scaling", rec.scaling);
  w.end_object();
}

std::string cone_to_json(const Cone& cone) {
  std::ostringstream os;
  JsonWriter w(os);
  write_cone(w, cone);
  return os.str();
}

std::string program_to_json(const ConicProgram& prog) {
  std::ostringstream os;
  JsonWriter w(os);
  write_program(w, prog);
  return os.str();
}

namespace {

using nlohmann::json;

Vector vector_from(const json& j) {
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from(const json& j) {
  const size_t rows = j.size();
  if (rows == 0) return Eigen::MatrixXd();
  const size_t cols = j[0].size();
  Eigen::MatrixXd M(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw DomainError("matrix rows have unequal lengths");
    for (size_t k = 0; k < cols; ++k) M(static_cast<int>(i), static_cast<int>(k)) = j[i][k].get<double>();
  }
  return M;
}

ConePtr cone_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "orthant") return make_orthant(j.at("n").get<int>());
  if (kind == "weighted_orthant") return make_weighted_orthant(vector_from(j.at("weights")));
  if (kind == "psd") return make_psd(j.at("m").get<int>());
  if (kind == "soc") return make_soc(j.at("widths").get<std::vector<int>>());
  if (kind == "exp") return make_exp(j.at("copies").get<int>());
  if (kind == "lmi_slice") {
    if (j.contains("spec")) {
      const std::string spec = j["spec"].get<std::string>();
      if (spec.rfind("toeplitz-tridiag:", 0) == 0) return parse_cone_spec(spec);
    }
    std::vector<SymMatrix> mats;
    for (const auto& A : j.at("mats")) mats.push_back(matrix_from(A));
    return make_lmi_slice(matrix_from(j.at("a0")), std::move(mats));
  }
  if (kind == "product") {
    std::vector<ConePtr> parts;
    for (const auto& p : j.at("parts")) parts.push_back(cone_from(p));
    return make_product(std::move(parts));
  }
  throw DomainError("unknown cone kind '" + kind + "'");
}

}  // namespace

ConePtr cone_from_json(const std::string& text) { return cone_from(json::parse(text)); }

ConicProgram program_from_json(const std::string& text) {
  const json j = json::parse(text);
  ConicProgram prog;
  prog.cone = cone_from(j.at("cone"));
  prog.A = matrix_from(j.at("A"));
  prog.b = vector_from(j.at("b"));
  prog.c = vector_from(j.at("c"));
  prog.x0 = vector_from(j.at("x0"));
  prog.y0 = vector_from(j.at("y0"));
  prog.s0 = vector_from(j.at("s0"));
  return prog;
}

ConicProgram program_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return program_from_json(buf.str());
}

}  // namespace conik
