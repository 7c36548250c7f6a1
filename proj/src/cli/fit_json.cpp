#include "climact/serialize.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "climact/csv.hpp"
#include "climact/rng.hpp"

namespace climact {

using nlohmann::json;

FitDocument make_fit_document(const FitResult& result, const Dataset& data,
                              const std::string& variant,
                              double accuracy_mean, double accuracy_sd) {
  FitDocument doc;
  doc.var_s = result.var_s;
  doc.variant = variant;
  doc.best_restart = result.best_restart;
  doc.restarts = result.restarts;
  doc.parameters = result.parameters;
  doc.elbo_trace = result.elbo_trace;
  doc.accuracy_mean = accuracy_mean;
  doc.accuracy_sd = accuracy_sd;
  doc.sympathy.reserve(data.n_users());
  for (std::size_t u = 0; u < data.n_users(); ++u)
    doc.sympathy.push_back({data.users[u].id, result.sympathy_mean[u],
                            data.users[u].activated != 0 ? 1 : 0});
  return doc;
}

std::string fit_document_to_json(const FitDocument& doc) {
  json j;
  j["schema"] = "climact-fit-v1";
  j["var_s"] = doc.var_s;
  j["variant"] = doc.variant;
  j["best_restart"] = doc.best_restart;
  j["accuracy_mean"] = doc.accuracy_mean;
  j["accuracy_sd"] = doc.accuracy_sd;
  j["restarts"] = json::array();
  for (const RestartRecord& r : doc.restarts)
    j["restarts"].push_back({{"elbo", r.final_elbo},
                             {"accuracy", r.accuracy},
                             {"steps", r.steps_run},
                             {"diverged", r.diverged}});
  j["parameters"] = json::array();
  for (const ParamSummary& p : doc.parameters)
    j["parameters"].push_back({{"name", p.name},
                               {"mean", p.mean},
                               {"ci_low", p.ci_low},
                               {"ci_high", p.ci_high}});
  j["elbo_trace"] = doc.elbo_trace;
  j["sympathy"] = json::array();
  for (const SympathyEntry& s : doc.sympathy)
    j["sympathy"].push_back(
        {{"user_id", s.user_id}, {"mean", s.mean}, {"a", s.activated}});
  return j.dump(2) + "\n";
}

FitDocument fit_document_from_json(const std::string& text,
                                   const std::string& context) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(context + ": bad JSON: " + e.what());
  }
  try {
    FitDocument doc;
    doc.var_s = j.at("var_s").get<double>();
    doc.variant = j.value("variant", "full");
    doc.best_restart = j.at("best_restart").get<std::size_t>();
    doc.accuracy_mean = j.value("accuracy_mean", 0.0);
    doc.accuracy_sd = j.value("accuracy_sd", 0.0);
    for (const json& r : j.at("restarts"))
      doc.restarts.push_back({r.at("elbo").get<double>(),
                              r.at("accuracy").get<double>(),
                              r.at("steps").get<std::size_t>(),
                              r.at("diverged").get<bool>()});
    for (const json& p : j.at("parameters"))
      doc.parameters.push_back({p.at("name").get<std::string>(),
                                p.at("mean").get<double>(),
                                p.at("ci_low").get<double>(),
                                p.at("ci_high").get<double>()});
    doc.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
    for (const json& s : j.at("sympathy"))
      doc.sympathy.push_back({s.at("user_id").get<std::string>(),
                              s.at("mean").get<double>(),
                              s.at("a").get<int>()});
    return doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument(context + ": bad fit document: " + e.what());
  }
}

namespace {

struct Field {
  const char* name;
  double* scalar = nullptr;
  double* arr = nullptr;
  std::size_t len = 0;
};

std::vector<Field> param_fields(ModelParameters& p) {
  return {
      {"beta_E0", &p.beta_e0},
      {"beta_E1", &p.beta_e1},
      {"theta_E", &p.theta_e},
      {"beta_P0", &p.beta_pl0},
      {"beta_P1", &p.beta_pl1},
      {"beta_P2", &p.beta_pl2},
      {"beta_P3", &p.beta_pl3},
      {"beta_S1", nullptr, p.beta_s1.data(), 4},
      {"beta_S2", &p.beta_s2},
      {"beta_S3", nullptr, p.beta_s3.data(), 3},
      {"beta_p0", &p.beta_ps0},
      {"beta_p1", nullptr, p.beta_ps1.data(), 4},
      {"beta_p2", &p.beta_ps2},
      {"beta_p3", &p.beta_ps3},
      {"beta_p4", &p.beta_ps4},
      {"beta_I0", &p.beta_i0},
      {"beta_I1", nullptr, p.beta_i1.data(), 4},
      {"beta_I2", &p.beta_i2},
      {"beta_A0", &p.beta_a0},
      {"beta_A1", &p.beta_a1},
      {"beta_A2", &p.beta_a2},
      {"beta_A3", nullptr, p.beta_a3.data(), 3},
      {"beta_A4", nullptr, p.beta_a4.data(), 3},
      {"beta_A5", &p.beta_a5},
  };
}

}  // namespace

ModelParameters params_from_json(const std::string& text,
                                 const std::string& context) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(context + ": bad JSON: " + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument(context + ": expected a JSON object");
  ModelParameters p;
  auto fields = param_fields(p);
  for (const auto& [key, value] : j.items()) {
    const Field* field = nullptr;
    for (const Field& f : fields)
      if (key == f.name) field = &f;
    if (!field)
      throw std::invalid_argument(context + ": unknown parameter '" + key +
                                  "'");
    try {
      if (field->scalar) {
        *field->scalar = value.get<double>();
      } else {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != field->len)
          throw std::invalid_argument(context + ": '" + key + "' expects " +
                                      std::to_string(field->len) + " values");
        for (std::size_t i = 0; i < field->len; ++i) field->arr[i] = v[i];
      }
    } catch (const json::exception&) {
      throw std::invalid_argument(context + ": bad value for '" + key + "'");
    }
  }
  return p;
}

std::string params_to_json(const ModelParameters& params) {
  ModelParameters copy = params;
  json j;
  for (const Field& f : param_fields(copy)) {
    if (f.scalar) {
      j[f.name] = *f.scalar;
    } else {
      j[f.name] = std::vector<double>(f.arr, f.arr + f.len);
    }
  }
  return j.dump(2) + "\n";
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t h = fnv1a64(bytes);
  char buf[20];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace climact
