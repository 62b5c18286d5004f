#include "autorisk/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "autorisk/errors.hpp"

namespace autorisk {

std::string_view model_kind(const AnyModel& model) {
  if (const auto* glm = std::get_if<FittedGlm>(&model)) {
    return to_string(glm->kind);
  }
  return "lda";
}

Eigen::VectorXd predict_proba(const AnyModel& model,
                              const DesignMatrix& design) {
  return std::visit(
      [&](const auto& m) { return predict_proba(m, design); }, model);
}

std::string model_to_json(const AnyModel& model) {
  if (const auto* glm = std::get_if<FittedGlm>(&model)) {
    return glm_to_json(*glm);
  }
  return lda_to_json(std::get<LdaModel>(model));
}

AnyModel model_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lda") return lda_from_json(text);
  return glm_from_json(text);
}

void write_model(const std::filesystem::path& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << model_to_json(model);
}

AnyModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace autorisk
