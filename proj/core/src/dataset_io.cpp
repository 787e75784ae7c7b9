#include "causalsurv/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "text_util.hpp"

namespace causalsurv {

namespace {

using ordered_json = nlohmann::ordered_json;

std::runtime_error cell_error(std::size_t row, const std::string& column,
                              const std::string& message) {
  return std::runtime_error("row " + std::to_string(row) + ", column " + column + ": " + message);
}

double parse_cell(std::size_t row, const std::string& column, const std::string& text) {
  try {
    return detail::parse_double(text);
  } catch (const std::invalid_argument& e) {
    throw cell_error(row, column, e.what());
  }
}

int parse_flag(std::size_t row, const std::string& column, const std::string& text) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw cell_error(row, column, "must be 0 or 1, got '" + text + "'");
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

DatasetSchema default_schema(const std::vector<std::string>& covariate_names) {
  DatasetSchema schema;
  for (const auto& name : covariate_names) schema.covariates.push_back({name, {}, {}});
  return schema;
}

std::vector<std::string> encoded_feature_names(const DatasetSchema& schema) {
  std::vector<std::string> names;
  for (const auto& col : schema.covariates) {
    if (col.one_hot.empty()) {
      names.push_back(col.name);
    } else {
      for (const auto& cat : col.one_hot) names.push_back(col.name + "=" + cat);
    }
  }
  return names;
}

LoadedDataset load_dataset(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  const auto header = detail::split_csv_line(strip_cr(line));
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);

  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw std::runtime_error("missing column: " + name);
    return it->second;
  };
  const std::size_t id_col = column(schema.id_column);
  const std::size_t time_col = column(schema.time_column);
  const std::size_t event_col = column(schema.event_column);
  const std::size_t treatment_col = column(schema.treatment_column);
  std::vector<std::size_t> cov_cols;
  for (const auto& col : schema.covariates) cov_cols.push_back(column(col.name));

  LoadedDataset out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }

    SurvivalRecord rec;
    rec.id = fields[id_col];
    rec.time = parse_cell(row, schema.time_column, fields[time_col]);
    if (rec.time < 0.0) throw cell_error(row, schema.time_column, "negative time");
    rec.event = parse_flag(row, schema.event_column, fields[event_col]);
    rec.treatment = parse_flag(row, schema.treatment_column, fields[treatment_col]);

    for (std::size_t c = 0; c < schema.covariates.size(); ++c) {
      const auto& col = schema.covariates[c];
      const auto& cell = fields[cov_cols[c]];
      if (!col.one_hot.empty()) {
        bool known = false;
        for (const auto& cat : col.one_hot) {
          const bool hit = cell == cat;
          known = known || hit;
          rec.covariates.push_back(hit ? 1.0 : 0.0);
        }
        if (!known) throw cell_error(row, col.name, "unknown category '" + cell + "'");
      } else if (!col.codes.empty()) {
        auto it = col.codes.find(cell);
        if (it == col.codes.end()) throw cell_error(row, col.name, "unknown category '" + cell + "'");
        rec.covariates.push_back(it->second);
      } else {
        rec.covariates.push_back(parse_cell(row, col.name, cell));
      }
    }

    out.report.n_events += static_cast<std::size_t>(rec.event == 1);
    ++(rec.treatment == 1 ? out.report.n_arm1 : out.report.n_arm0);
    out.records.push_back(std::move(rec));
  }
  out.report.n_rows = row;
  return out;
}

void write_dataset(const std::string& path, std::span<const SurvivalRecord> records,
                   const std::vector<std::string>& covariate_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "id,time,event,treatment";
  for (const auto& name : covariate_names) out << ',' << name;
  out << '\n';
  for (const auto& rec : records) {
    if (rec.covariates.size() != covariate_names.size()) {
      throw std::invalid_argument("covariate length mismatch for record " + rec.id);
    }
    out << rec.id << ',' << detail::format_double(rec.time) << ',' << rec.event << ','
        << rec.treatment;
    for (double c : rec.covariates) out << ',' << detail::format_double(c);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string schema_to_json(const DatasetSchema& schema) {
  ordered_json j;
  j["id_column"] = schema.id_column;
  j["time_column"] = schema.time_column;
  j["event_column"] = schema.event_column;
  j["treatment_column"] = schema.treatment_column;
  j["covariates"] = ordered_json::array();
  for (const auto& col : schema.covariates) {
    ordered_json c;
    c["name"] = col.name;
    if (!col.codes.empty()) {
      ordered_json codes;
      for (const auto& [label, value] : col.codes) codes[label] = value;
      c["codes"] = std::move(codes);
    }
    if (!col.one_hot.empty()) c["one_hot"] = col.one_hot;
    j["covariates"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

DatasetSchema schema_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  DatasetSchema schema;
  for (const auto& [key, value] : j.items()) {
    if (key == "id_column") {
      schema.id_column = value.get<std::string>();
    } else if (key == "time_column") {
      schema.time_column = value.get<std::string>();
    } else if (key == "event_column") {
      schema.event_column = value.get<std::string>();
    } else if (key == "treatment_column") {
      schema.treatment_column = value.get<std::string>();
    } else if (key == "covariates") {
      for (const auto& c : value) {
        CovariateColumn col;
        for (const auto& [ckey, cval] : c.items()) {
          if (ckey == "name") {
            col.name = cval.get<std::string>();
          } else if (ckey == "codes") {
            for (const auto& [label, code] : cval.items()) col.codes[label] = code.get<double>();
          } else if (ckey == "one_hot") {
            col.one_hot = cval.get<std::vector<std::string>>();
          } else {
            throw std::runtime_error("unknown schema key: " + ckey);
          }
        }
        if (col.name.empty()) throw std::runtime_error("covariate without a name");
        if (!col.codes.empty() && !col.one_hot.empty()) {
          throw std::runtime_error("column " + col.name + " sets both codes and one_hot");
        }
        schema.covariates.push_back(std::move(col));
      }
    } else {
      throw std::runtime_error("unknown schema key: " + key);
    }
  }
  return schema;
}

DatasetSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schema_from_json(buf.str());
}

}  // namespace causalsurv
