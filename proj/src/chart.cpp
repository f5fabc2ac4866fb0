#include "momsec/chart.hpp"

#include <stdexcept>

namespace momsec {

Chart Chart::extended(
    const std::vector<std::string>& extra_names,
    const std::vector<std::pair<double, double>>& extra_box) const {
    if (extra_names.size() != extra_box.size())
        throw std::invalid_argument("extended: names/box size mismatch");
    Chart out = *this;
    out.names.insert(out.names.end(), extra_names.begin(), extra_names.end());
    out.box.insert(out.box.end(), extra_box.begin(), extra_box.end());
    return out;
}

std::vector<std::vector<Expr>> SmoothMap::jacobian() const {
    std::vector<std::vector<Expr>> J(components.size());
    for (std::size_t k = 0; k < components.size(); ++k) {
        J[k].reserve(source.dim());
        for (const std::string& name : source.names)
            J[k].push_back(components[k].derivative(name));
    }
    return J;
}

Env SmoothMap::image_env(const Env& source_env) const {
    Env out;
    for (std::size_t k = 0; k < components.size(); ++k)
        out[target.names[k]] = components[k].eval(source_env);
    return out;
}

std::pair<SamplePlan, SamplePlan> SamplePlan::split(int at) const {
    SamplePlan head = *this;
    SamplePlan tail = *this;
    head.count = at;
    tail.count = count - at;
    tail.offset = offset + static_cast<std::uint64_t>(at);
    return {head, tail};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double to_unit_interval(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::vector<double> sample_point(const Chart& chart, const SamplePlan& plan,
                                 int j) {
    const std::size_t n = chart.dim();
    std::vector<double> point(n);
    const std::uint64_t row = plan.offset + static_cast<std::uint64_t>(j);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t counter = row * n + i;
        const std::uint64_t word =
            splitmix64(plan.seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
        const double u = to_unit_interval(word);
        const auto [lo, hi] = chart.box[i];
        const double pad = plan.margin * (hi - lo);
        point[i] = lo + pad + u * (hi - lo - 2.0 * pad);
    }
    return point;
}

Env sample_env(const Chart& chart, const SamplePlan& plan, int j) {
    const std::vector<double> point = sample_point(chart, plan, j);
    Env env;
    env.reserve(chart.dim());
    for (std::size_t i = 0; i < chart.dim(); ++i) env[chart.names[i]] = point[i];
    return env;
}

}  // namespace momsec
