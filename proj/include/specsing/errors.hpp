#pragma once

#include <stdexcept>
#include <string>

namespace specsing {

// Two error families, matching the CLI exit-code contract:
// configuration/usage problems (exit 2) vs. numerical failures (exit 3).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SPECSING_CONFIG_ERROR(Name)                                     \
    struct Name : ConfigError {                                         \
        explicit Name(const std::string& msg)                           \
            : ConfigError(std::string(#Name) + ": " + msg) {}           \
    }

#define SPECSING_NUMERICS_ERROR(Name)                                   \
    struct Name : NumericsError {                                       \
        explicit Name(const std::string& msg)                           \
            : NumericsError(std::string(#Name) + ": " + msg) {}         \
    }

SPECSING_CONFIG_ERROR(UnorderedCenters);
SPECSING_CONFIG_ERROR(CenterOutOfRange);
SPECSING_CONFIG_ERROR(EmptyArray);
SPECSING_CONFIG_ERROR(NonIntegrableProfile);
SPECSING_CONFIG_ERROR(DeltaNotPointwise);
SPECSING_CONFIG_ERROR(MalformedConfig);

SPECSING_NUMERICS_ERROR(ZeroWaveNumber);
SPECSING_NUMERICS_ERROR(StepSizeUnderflow);
SPECSING_NUMERICS_ERROR(RefractiveRootVanishes);
SPECSING_NUMERICS_ERROR(QuadratureFailure);
SPECSING_NUMERICS_ERROR(NoConvergence);
SPECSING_NUMERICS_ERROR(JacobianSingular);
SPECSING_NUMERICS_ERROR(DegenerateXY);
SPECSING_NUMERICS_ERROR(DegenerateF010);
SPECSING_NUMERICS_ERROR(NotAtSingularity);
SPECSING_NUMERICS_ERROR(NoRootInRange);
SPECSING_NUMERICS_ERROR(OutsideSlab);

#undef SPECSING_CONFIG_ERROR
#undef SPECSING_NUMERICS_ERROR

} // namespace specsing
