#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tvc/io.hpp"

namespace tvc {

namespace {

constexpr const char* kFieldFormat = "tvc-field";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("csv: not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ParameterError("csv: trailing characters in '" + text + "'");
  return v;
}

} // namespace

Json to_json(const ScalarField& field) {
  Json j;
  j["format"] = kFieldFormat;
  j["version"] = 1;
  j["dim"] = field.dim();
  j["shape"] = field.shape();
  j["M"] = field.box ? Json(*field.box) : Json(nullptr);
  j["values"] = std::vector<double>(field.values().data(), field.values().data() + field.size());
  return j;
}

ScalarField field_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kFieldFormat)
    throw ParameterError("field json: missing or wrong \"format\"");
  const auto shape = j.at("shape").get<Shape>();
  if (j.contains("dim") && j.at("dim").get<int>() != static_cast<int>(shape.size()))
    throw ParameterError("field json: dim does not match shape");
  const auto values = j.at("values").get<std::vector<double>>();
  ScalarField field(shape, Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Index>(values.size())));
  if (!field.all_finite()) throw ParameterError("field json: non-finite value");
  if (j.contains("M") && !j.at("M").is_null()) field.box = j.at("M").get<double>();
  return field;
}

Json to_json(const SampleSet& samples) {
  return Json{{"total", samples.total}, {"indices", samples.indices}};
}

SampleSet samples_from_json(const Json& j) {
  SampleSet s;
  s.total = j.at("total").get<Index>();
  s.indices = j.at("indices").get<std::vector<Index>>();
  s.validate();
  return s;
}

void save_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError(path.string() + ": " + e.what());
  }
}

void save_field_csv(const std::filesystem::path& path, const ScalarField& field) {
  if (field.dim() > 2) throw ParameterError("csv export supports 1-D and 2-D fields only");
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const Index rows = field.dim() == 1 ? 1 : field.extent(0);
  const Index cols = field.dim() == 1 ? field.extent(0) : field.extent(1);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) out << (c ? "," : "") << field[r * cols + c];
    out << '\n';
  }
}

ScalarField load_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::vector<double> values;
  Index rows = 0, cols = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line, ',');
    if (cols >= 0 && static_cast<Index>(cells.size()) != cols)
      throw ParameterError("csv: ragged rows in " + path.string());
    cols = static_cast<Index>(cells.size());
    for (const auto& c : cells) values.push_back(parse_double(c));
    ++rows;
  }
  if (rows == 0) throw ParameterError("csv: empty file " + path.string());
  Shape shape = rows == 1 ? Shape{cols} : Shape{rows, cols};
  return ScalarField(shape, Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Index>(values.size())));
}

ScalarField load_field(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_field_csv(path);
  return field_from_json(load_json(path));
}

void save_field(const std::filesystem::path& path, const ScalarField& field) {
  if (path.extension() == ".csv") return save_field_csv(path, field);
  save_json(path, to_json(field));
}

} // namespace tvc
