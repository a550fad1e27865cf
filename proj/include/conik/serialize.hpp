#pragma once

#include "conik/ipm.hpp"
#include "conik/worstcase.hpp"

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace conik {

// Doubles at 17 significant digits so identical invocations produce
// byte-identical files.
std::string format_double(double v);

// Minimal streaming writer: keys keep insertion order, no locale surprises.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(const Vector& v);
  JsonWriter& value(const Eigen::MatrixXd& M);  // nested rows (row-major)

  template <class T>
  JsonWriter& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }

 private:
  void comma();
  std::ostream& os_;
  std::vector<bool> first_;  // per nesting level
};

void write_cone(JsonWriter& w, const Cone& cone);
void write_program(JsonWriter& w, const ConicProgram& prog);
void write_certificate(JsonWriter& w, const WorstCaseCertificate& cert);
void write_trace_record(JsonWriter& w, const IterationRecord& rec);

std::string cone_to_json(const Cone& cone);
std::string program_to_json(const ConicProgram& prog);

ConePtr cone_from_json(const std::string& text);
ConicProgram program_from_json(const std::string& text);
ConicProgram program_from_file(const std::string& path);

}  // namespace conik
