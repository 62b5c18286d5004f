#ifndef AUTORISK_MODEL_HPP
#define AUTORISK_MODEL_HPP

#include <filesystem>
#include <string>
#include <variant>

#include "autorisk/glm.hpp"
#include "autorisk/lda.hpp"

namespace autorisk {

using AnyModel = std::variant<FittedGlm, LdaModel>;

// "logit", "fractional" or "lda"
std::string_view model_kind(const AnyModel& model);

Eigen::VectorXd predict_proba(const AnyModel& model,
                              const DesignMatrix& design);

std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);

void write_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel read_model(const std::filesystem::path& path);

}  // namespace autorisk

#endif
