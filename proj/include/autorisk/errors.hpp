#ifndef AUTORISK_ERRORS_HPP
#define AUTORISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace autorisk {

// Base for all typed errors raised by the library. CLI maps these to exit
// code 1 (runtime/data), InvalidConfig and usage problems to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define AUTORISK_DEFINE_ERROR(Name)   \
  struct Name : Error {               \
    using Error::Error;               \
  }

// data_core
AUTORISK_DEFINE_ERROR(MissingColumn);
AUTORISK_DEFINE_ERROR(BadIscoCode);
AUTORISK_DEFINE_ERROR(BadEnumValue);
AUTORISK_DEFINE_ERROR(AllMissingField);
AUTORISK_DEFINE_ERROR(EmptyDesign);
AUTORISK_DEFINE_ERROR(RankDeficient);
AUTORISK_DEFINE_ERROR(ZeroVariance);

// labeling
AUTORISK_DEFINE_ERROR(NoVotes);
AUTORISK_DEFINE_ERROR(DuplicateLabel);

// glm_engine
AUTORISK_DEFINE_ERROR(Separation);
AUTORISK_DEFINE_ERROR(Singular);
AUTORISK_DEFINE_ERROR(NoConvergence);
AUTORISK_DEFINE_ERROR(OneClassOnly);
AUTORISK_DEFINE_ERROR(SingularCovariance);
AUTORISK_DEFINE_ERROR(FeatureMismatch);

// evaluation / diagnostics
AUTORISK_DEFINE_ERROR(DegenerateSplit);
AUTORISK_DEFINE_ERROR(TooFewPoints);

// synth / cli
AUTORISK_DEFINE_ERROR(InvalidConfig);
AUTORISK_DEFINE_ERROR(IoError);

#undef AUTORISK_DEFINE_ERROR

}  // namespace autorisk

#endif
