#include "latcount/config.hpp"

#include "latcount/error.hpp"

#include <cmath>
#include <string>

namespace latcount {

std::size_t sample_size(double epsilon, double delta, std::size_t gamma)
{
    if (!(epsilon > 0.0) || !(delta > 0.0) || gamma == 0) {
        throw Error(ErrorKind::input, "sample_size: epsilon, delta and gamma must be positive");
    }
    // the band absorbs representation error, e.g. 2/(0.1*0.04) = 499.99999999999994
    const double raw = std::ceil(2.0 / (delta * epsilon * epsilon) - 1e-9);
    const auto s = static_cast<std::size_t>(raw);
    return ((s + gamma - 1) / gamma) * gamma;
}

std::size_t RunConfig::samples_per_round() const
{
    return s ? s : sample_size(epsilon, delta, gamma);
}

void RunConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::input, "invalid configuration: " + msg); };
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
    if (gamma < 2) fail("gamma must be at least 2");
    const std::size_t per_round = samples_per_round();
    if (per_round % gamma != 0) fail("s must be divisible by gamma");
    if (!(r_min < 0.5 && 0.5 < r_max && r_min > 0.0 && r_max < 1.0)) fail("need 0 < r_min < 0.5 < r_max < 1");
    if (!(mu > 0.0)) fail("mu must be positive");
    if (max_rounds < 1) fail("max_rounds must be at least 1");
    if (max_disturbs < 1) fail("max_disturbs must be at least 1");
}

}  // namespace latcount
