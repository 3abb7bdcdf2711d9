#include "qport/distribution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "qport/errors.hpp"
#include "qport/numeric.hpp"
#include "qport/textio.hpp"

namespace qport {

std::uint32_t QubitAllocation::total_qubits() const {
    std::uint32_t total = 0;
    for (std::uint32_t q : qubits_per_dim)
        total += q;
    return total;
}

std::uint32_t QubitAllocation::offset(std::size_t dim) const {
    std::uint32_t off = 0;
    for (std::size_t d = 0; d < dim; ++d)
        off += qubits_per_dim[d];
    return off;
}

QubitAllocation QubitAllocation::parse(std::string_view text) {
    QubitAllocation alloc;
    for (const std::string& token : split(text, ',')) {
        const std::uint64_t q = parse_u64(trim(token), "qubit allocation");
        if (q == 0)
            raise(ErrorCode::ParseError, "qubit allocation: every dimension needs "
                                         "at least one qubit");
        alloc.qubits_per_dim.push_back(static_cast<std::uint32_t>(q));
    }
    if (alloc.qubits_per_dim.empty())
        raise(ErrorCode::ParseError, "qubit allocation is empty");
    if (alloc.total_qubits() > 63)
        raise(ErrorCode::CapacityExceeded, "allocation wider than 63 qubits");
    return alloc;
}

std::string QubitAllocation::str() const {
    std::string out;
    for (std::size_t d = 0; d < qubits_per_dim.size(); ++d) {
        if (d)
            out += ',';
        out += std::to_string(qubits_per_dim[d]);
    }
    return out;
}

double GridAxis::value(std::uint32_t i) const {
    if (i == 0)
        return low;
    if (i == num_points - 1)
        return high; // exact endpoint, no accumulated step error
    return low + i * step();
}

namespace {

void check_shapes(const QubitAllocation& alloc, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& sigma) {
    const auto d = static_cast<Eigen::Index>(alloc.dims());
    if (d == 0)
        raise(ErrorCode::DimensionMismatch, "qubit allocation is empty");
    for (std::uint32_t q : alloc.qubits_per_dim)
        if (q == 0)
            raise(ErrorCode::DimensionMismatch, "allocation has a zero-qubit dimension");
    if (mu.size() != d)
        raise(ErrorCode::DimensionMismatch,
              "mu has " + std::to_string(mu.size()) + " entries for " +
                  std::to_string(d) + " dimensions");
    if (sigma.rows() != d || sigma.cols() != d)
        raise(ErrorCode::DimensionMismatch,
              "sigma is " + std::to_string(sigma.rows()) + "x" +
                  std::to_string(sigma.cols()) + " for " + std::to_string(d) +
                  " dimensions");
}

} // namespace

Grid build_grid(const QubitAllocation& alloc, const Eigen::VectorXd& mu_monthly,
                const Eigen::MatrixXd& sigma_monthly, double bounds_k) {
    check_shapes(alloc, mu_monthly, sigma_monthly);
    if (!(bounds_k > 0.0))
        raise(ErrorCode::ParseError, "bounds-k must be positive");

    Grid grid;
    for (std::size_t d = 0; d < alloc.dims(); ++d) {
        const double var = sigma_monthly(static_cast<Eigen::Index>(d),
                                         static_cast<Eigen::Index>(d));
        if (!(var > 0.0))
            raise(ErrorCode::DegenerateVariance,
                  "variance of dimension " + std::to_string(d) + " is not positive");
        const double sd = std::sqrt(var);
        const double mid = mu_monthly(static_cast<Eigen::Index>(d));
        GridAxis axis;
        axis.low = mid - bounds_k * sd;
        axis.high = mid + bounds_k * sd;
        axis.num_points = std::uint32_t{1} << alloc.qubits_per_dim[d];
        grid.axes.push_back(axis);
    }
    return grid;
}

std::vector<std::uint32_t> split_index(const QubitAllocation& alloc, std::uint64_t joint) {
    std::vector<std::uint32_t> idx(alloc.dims());
    for (std::size_t d = 0; d < alloc.dims(); ++d) {
        const std::uint64_t mask = (std::uint64_t{1} << alloc.qubits_per_dim[d]) - 1;
        idx[d] = static_cast<std::uint32_t>((joint >> alloc.offset(d)) & mask);
    }
    return idx;
}

DiscretizedDistribution discretize(const Grid& grid, const Eigen::VectorXd& mu_monthly,
                                   const Eigen::MatrixXd& sigma_monthly) {
    QubitAllocation alloc;
    for (const GridAxis& axis : grid.axes) {
        std::uint32_t q = 0;
        while ((std::uint32_t{1} << q) < axis.num_points)
            ++q;
        if ((std::uint32_t{1} << q) != axis.num_points || q == 0)
            raise(ErrorCode::DimensionMismatch,
                  "axis point count must be a power of two and at least 2");
        alloc.qubits_per_dim.push_back(q);
    }
    check_shapes(alloc, mu_monthly, sigma_monthly);

    Eigen::LLT<Eigen::MatrixXd> llt(sigma_monthly);
    if (llt.info() != Eigen::Success)
        raise(ErrorCode::SingularCovariance,
              "covariance has no Cholesky factor (singular or indefinite)");
    const Eigen::MatrixXd L = llt.matrixL();

    const std::size_t dims = grid.dims();
    const std::uint64_t total = std::uint64_t{1} << alloc.total_qubits();

    // log-density up to a constant: -0.5 * |L^-1 (x - mu)|^2
    std::vector<double> logd(total);
    double logd_max = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd z(static_cast<Eigen::Index>(dims));
    Eigen::VectorXd y(static_cast<Eigen::Index>(dims));
    for (std::uint64_t j = 0; j < total; ++j) {
        const std::vector<std::uint32_t> idx = split_index(alloc, j);
        for (std::size_t d = 0; d < dims; ++d)
            z(static_cast<Eigen::Index>(d)) =
                grid.axes[d].value(idx[d]) - mu_monthly(static_cast<Eigen::Index>(d));
        for (std::size_t r = 0; r < dims; ++r) {
            double acc = z(static_cast<Eigen::Index>(r));
            for (std::size_t cidx = 0; cidx < r; ++cidx)
                acc -= L(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) *
                       y(static_cast<Eigen::Index>(cidx));
            y(static_cast<Eigen::Index>(r)) =
                acc / L(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
        }
        logd[j] = -0.5 * y.squaredNorm();
        logd_max = std::max(logd_max, logd[j]);
    }

    DiscretizedDistribution dist;
    dist.alloc = alloc;
    dist.grid = grid;
    dist.probabilities.resize(total);
    for (std::uint64_t j = 0; j < total; ++j)
        dist.probabilities[j] = std::exp(logd[j] - logd_max);
    const double sum = pairwise_sum(dist.probabilities);
    for (double& p : dist.probabilities)
        p /= sum;
    return dist;
}

Circuit synthesize(const DiscretizedDistribution& dist) {
    const std::uint32_t n = dist.alloc.total_qubits();
    const std::uint64_t total = std::uint64_t{1} << n;
    if (dist.probabilities.size() != total)
        raise(ErrorCode::DimensionMismatch,
              "probability array has " + std::to_string(dist.probabilities.size()) +
                  " entries, allocation needs " + std::to_string(total));

    // sums[m][v]: probability mass of the subtree whose top m index bits are v
    std::vector<std::vector<double>> sums(n + 1);
    sums[n] = dist.probabilities;
    for (std::uint32_t m = n; m > 0; --m) {
        sums[m - 1].resize(std::uint64_t{1} << (m - 1));
        for (std::uint64_t v = 0; v < sums[m - 1].size(); ++v)
            sums[m - 1][v] = sums[m][2 * v] + sums[m][2 * v + 1];
    }
    if (!(sums[0][0] > 0.0))
        raise(ErrorCode::DegenerateVariance, "probabilities sum to zero");

    auto branch_angle = [&](std::uint32_t level, std::uint64_t v) {
        const double s0 = sums[level + 1][2 * v];
        const double s1 = sums[level + 1][2 * v + 1];
        if (s0 + s1 <= 0.0)
            return 0.0; // empty subtree; rotation is irrelevant
        return 2.0 * std::atan2(std::sqrt(s1), std::sqrt(s0));
    };

    Circuit circuit(n);
    circuit.ry(n - 1, branch_angle(0, 0));
    for (std::uint32_t m = 1; m < n; ++m) {
        std::vector<std::uint32_t> controls(m);
        for (std::uint32_t b = 0; b < m; ++b)
            controls[b] = n - m + b; // ascending, lowest control is the LSB of v
        std::vector<double> angles(std::uint64_t{1} << m);
        for (std::uint64_t v = 0; v < angles.size(); ++v)
            angles[v] = branch_angle(m, v);
        circuit.mcry(std::move(controls), n - 1 - m, std::move(angles));
    }
    return circuit;
}

Circuit combine_with_measurement(const Circuit& circuit) {
    if (circuit.measured)
        raise(ErrorCode::AlreadyMeasured, "circuit already carries a measurement");
    Circuit out = circuit;
    out.measured = true;
    return out;
}

GridMoments grid_moments(const DiscretizedDistribution& dist) {
    const auto dims = static_cast<Eigen::Index>(dist.grid.dims());
    GridMoments m;
    m.mean = Eigen::VectorXd::Zero(dims);
    m.covariance = Eigen::MatrixXd::Zero(dims, dims);

    Eigen::VectorXd x(dims);
    for (std::uint64_t j = 0; j < dist.size(); ++j) {
        const std::vector<std::uint32_t> idx = split_index(dist.alloc, j);
        for (Eigen::Index d = 0; d < dims; ++d)
            x(d) = dist.grid.axes[static_cast<std::size_t>(d)].value(
                idx[static_cast<std::size_t>(d)]);
        m.mean += dist.probabilities[j] * x;
    }
    for (std::uint64_t j = 0; j < dist.size(); ++j) {
        const std::vector<std::uint32_t> idx = split_index(dist.alloc, j);
        for (Eigen::Index d = 0; d < dims; ++d)
            x(d) = dist.grid.axes[static_cast<std::size_t>(d)].value(
                idx[static_cast<std::size_t>(d)]);
        const Eigen::VectorXd c = x - m.mean;
        // upper triangle mirrored onto the lower, so the result is exactly symmetric
        for (Eigen::Index r = 0; r < dims; ++r)
            for (Eigen::Index s = r; s < dims; ++s) {
                const double v = dist.probabilities[j] * (c(r) * c(s));
                m.covariance(r, s) += v;
                if (s != r)
                    m.covariance(s, r) = m.covariance(r, s);
            }
    }
    return m;
}

SynthesisCost synthesis_cost(const QubitAllocation& alloc, int repeats) {
    if (repeats < 1)
        raise(ErrorCode::ParseError, "repeats must be at least 1");
    const auto dims = static_cast<Eigen::Index>(alloc.dims());
    const Eigen::VectorXd mu = Eigen::VectorXd::Zero(dims);
    const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(dims, dims);
    const Grid grid = build_grid(alloc, mu, sigma, 3.0);

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    };

    std::vector<double> t_disc, t_synth, t_lower;
    DiscretizedDistribution dist;
    Circuit native(1), lowered(1);
    for (int r = 0; r < repeats; ++r) {
        auto t0 = clock::now();
        dist = discretize(grid, mu, sigma);
        t_disc.push_back(ms_since(t0));

        t0 = clock::now();
        native = synthesize(dist);
        t_synth.push_back(ms_since(t0));

        t0 = clock::now();
        lowered = lower(native);
        t_lower.push_back(ms_since(t0));
    }

    SynthesisCost cost;
    cost.alloc = alloc;
    cost.total_qubits = alloc.total_qubits();
    cost.predicted_ry = (std::uint64_t{1} << cost.total_qubits) - 1;
    cost.native_counts = gate_counts(native);
    cost.lowered_counts = gate_counts(lowered);
    cost.discretize_ms = median(t_disc);
    cost.synthesize_ms = median(t_synth);
    cost.lower_ms = median(t_lower);
    return cost;
}

std::string to_text(const DiscretizedDistribution& dist) {
    std::string out = "qport-dist v1\n";
    out += "alloc " + dist.alloc.str() + "\n";
    for (const GridAxis& axis : dist.grid.axes)
        out += "axis " + format_g17(axis.low) + " " + format_g17(axis.high) + " " +
               std::to_string(axis.num_points) + "\n";
    out += "probs " + std::to_string(dist.probabilities.size()) + "\n";
    for (double p : dist.probabilities)
        out += format_g17(p) + "\n";
    return out;
}

DiscretizedDistribution distribution_from_text(std::string_view text) {
    std::vector<std::string> lines;
    for (std::string& raw : split(text, '\n')) {
        const std::string_view t = trim(raw);
        if (!t.empty() && t.front() != '#')
            lines.push_back(std::string(t));
    }

    std::size_t at = 0;
    auto next = [&]() -> const std::string& {
        if (at >= lines.size())
            raise(ErrorCode::ParseError, "distribution text ended early");
        return lines[at++];
    };

    if (next() != "qport-dist v1")
        raise(ErrorCode::ParseError, "not a qport-dist v1 file");

    DiscretizedDistribution dist;
    {
        const std::string& line = next();
        if (!line.starts_with("alloc "))
            raise(ErrorCode::ParseError, "expected alloc line");
        dist.alloc = QubitAllocation::parse(line.substr(6));
    }
    for (std::size_t d = 0; d < dist.alloc.dims(); ++d) {
        const std::string& line = next();
        const std::vector<std::string> f = split(line, ' ');
        if (f.size() != 4 || f[0] != "axis")
            raise(ErrorCode::ParseError, "expected axis line with 3 fields");
        GridAxis axis;
        axis.low = parse_double(f[1], "axis low");
        axis.high = parse_double(f[2], "axis high");
        axis.num_points = static_cast<std::uint32_t>(parse_u64(f[3], "axis points"));
        if (axis.num_points != std::uint32_t{1} << dist.alloc.qubits_per_dim[d])
            raise(ErrorCode::DimensionMismatch, "axis point count does not match alloc");
        dist.grid.axes.push_back(axis);
    }
    {
        const std::string& line = next();
        const std::vector<std::string> f = split(line, ' ');
        if (f.size() != 2 || f[0] != "probs")
            raise(ErrorCode::ParseError, "expected probs line");
        const std::uint64_t count = parse_u64(f[1], "probability count");
        if (count != std::uint64_t{1} << dist.alloc.total_qubits())
            raise(ErrorCode::DimensionMismatch,
                  "probability count does not match alloc");
        dist.probabilities.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i)
            dist.probabilities.push_back(parse_double(next(), "probability"));
    }
    if (at != lines.size())
        raise(ErrorCode::ParseError, "trailing content after probabilities");
    return dist;
}

} // namespace qport
