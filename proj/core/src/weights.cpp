#include "ergolab/weights.hpp"

#include "ergolab/random.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace ergolab {

TrigPolynomial::TrigPolynomial(std::vector<Complex> coefficients,
                               std::vector<AlgebraElement> unitaries)
    : coefficients_(std::move(coefficients)), unitaries_(std::move(unitaries)) {
    if (coefficients_.empty() || coefficients_.size() != unitaries_.size())
        throw std::invalid_argument("trig polynomial needs matching coefficient/unitary lists");
    const AlgebraElement one = AlgebraElement::identity(unitaries_.front().algebra());
    for (const auto& u : unitaries_) {
        if (!u.same_algebra(unitaries_.front()))
            throw std::invalid_argument("trig polynomial unitaries live on different algebras");
        if (operator_norm(u.adjoint() * u - one) > 1e-10)
            throw std::invalid_argument("trig polynomial entries must be unitary");
    }
}

const AlgebraPtr& TrigPolynomial::algebra() const { return unitaries_.front().algebra(); }

double TrigPolynomial::coefficient_abs_sum() const {
    double s = 0.0;
    for (Complex z : coefficients_) s += std::abs(z);
    return s;
}

namespace {

AlgebraElement unitary_power(const AlgebraElement& u, std::int64_t k) {
    AlgebraElement base = u;
    std::optional<AlgebraElement> acc;
    std::int64_t e = k;
    while (e > 0) {
        if (e & 1) acc = acc ? (*acc * base) : base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc ? *acc : AlgebraElement::identity(u.algebra());
}

}  // namespace

AlgebraElement TrigPolynomial::eval(std::int64_t k) const {
    if (k < 0) throw std::invalid_argument("trig polynomial evaluated at negative k");
    AlgebraElement out = AlgebraElement::zero(algebra());
    for (size_t j = 0; j < coefficients_.size(); ++j)
        out = out + coefficients_[j] * unitary_power(unitaries_[j], k);
    return out;
}

double PerturbationSchedule::delta(std::int64_t j) const {
    switch (type) {
        case Type::none: return 0.0;
        case Type::harmonic: return eps0 / static_cast<double>(j + 1);
        case Type::geometric: return eps0 * std::pow(ratio, static_cast<double>(j));
    }
    return 0.0;
}

void PerturbationSchedule::validate() const {
    if (type == Type::none) return;
    if (!(eps0 >= 0.0) || !std::isfinite(eps0))
        throw std::invalid_argument("perturbation eps0 must be finite and >= 0");
    if (type == Type::geometric && !(ratio >= 0.0 && ratio < 1.0))
        throw std::invalid_argument("geometric perturbation needs 0 <= ratio < 1 to be Cesaro-null");
}

namespace {

struct CentralGen {
    std::vector<Complex> coeffs;
    std::vector<std::vector<double>> angles;  // [term][block]
    PerturbationSchedule schedule;
    std::uint64_t seed = 0;
};

struct ScalarGen {
    std::vector<Complex> coeffs;
    std::vector<double> angles;  // [term]
    PerturbationSchedule schedule;
    std::uint64_t seed = 0;
};

struct TrigGen {
    std::shared_ptr<const TrigPolynomial> psi;
    PerturbationSchedule schedule;
    std::uint64_t seed = 0;
};

struct MaskGen {
    std::shared_ptr<const WeightSequence> base;
    Subsequence indicator;
};

using Gen = std::variant<CentralGen, ScalarGen, TrigGen, MaskGen>;

}  // namespace

struct WeightSequence::Impl {
    AlgebraPtr algebra;
    WeightSequence::Kind kind;
    double bound = 0.0;
    bool central = false;
    bool constant_one = false;
    std::shared_ptr<const TrigPolynomial> design;
    Gen gen;
};

WeightSequence::Kind WeightSequence::kind() const { return impl_->kind; }
bool WeightSequence::central() const { return impl_->central; }
double WeightSequence::bound() const { return impl_->bound; }
const AlgebraPtr& WeightSequence::algebra() const { return impl_->algebra; }
bool WeightSequence::is_constant_one() const { return impl_->constant_one; }
std::shared_ptr<const TrigPolynomial> WeightSequence::design_polynomial() const {
    return impl_->design;
}

namespace {

// deterministic unimodular phase, pure in (seed, j, slot)
Complex hashed_phase(std::uint64_t seed, std::int64_t j, std::uint64_t slot) {
    const std::uint64_t h =
        Rng::mix(Rng::mix(seed, static_cast<std::uint64_t>(j)), 0x77eeULL + slot);
    const double angle = 2.0 * M_PI * (static_cast<double>(h >> 11) * 0x1.0p-53);
    return std::polar(1.0, angle);
}

std::optional<CenterElement> central_value(const WeightSequence::Impl& impl, std::int64_t j);

AlgebraElement general_value(const WeightSequence::Impl& impl, std::int64_t j) {
    if (auto c = central_value(impl, j)) return c->to_element();
    if (const auto* g = std::get_if<TrigGen>(&impl.gen)) {
        AlgebraElement v = g->psi->eval(j);
        const double d = g->schedule.delta(j);
        if (d > 0.0) {
            Rng rng(Rng::mix(g->seed, static_cast<std::uint64_t>(j)));
            AlgebraElement dir = random_element(impl.algebra, rng);
            const double norm = operator_norm(dir);
            if (norm > 0.0) v = v + (d / norm) * dir;
        }
        return v;
    }
    const auto& m = std::get<MaskGen>(impl.gen);
    if (m.indicator.contains(j)) return m.base->at(j);
    return AlgebraElement::zero(impl.algebra);
}

std::optional<CenterElement> central_value(const WeightSequence::Impl& impl, std::int64_t j) {
    if (const auto* c = std::get_if<CentralGen>(&impl.gen)) {
        const int blocks = impl.algebra->block_count();
        std::vector<Complex> scalars(static_cast<size_t>(blocks), Complex(0.0, 0.0));
        for (size_t l = 0; l < c->coeffs.size(); ++l)
            for (int b = 0; b < blocks; ++b)
                scalars[static_cast<size_t>(b)] +=
                    c->coeffs[l] * std::polar(1.0, static_cast<double>(j) *
                                                       c->angles[l][static_cast<size_t>(b)]);
        const double d = c->schedule.delta(j);
        if (d > 0.0)
            for (int b = 0; b < blocks; ++b)
                scalars[static_cast<size_t>(b)] +=
                    d * hashed_phase(c->seed, j, static_cast<std::uint64_t>(b));
        return CenterElement(impl.algebra, std::move(scalars));
    }
    if (const auto* s = std::get_if<ScalarGen>(&impl.gen)) {
        Complex beta(0.0, 0.0);
        for (size_t l = 0; l < s->coeffs.size(); ++l)
            beta += s->coeffs[l] * std::polar(1.0, static_cast<double>(j) * s->angles[l]);
        const double d = s->schedule.delta(j);
        if (d > 0.0) beta += d * hashed_phase(s->seed, j, 0);
        return CenterElement(impl.algebra,
                             std::vector<Complex>(static_cast<size_t>(impl.algebra->block_count()), beta));
    }
    if (const auto* m = std::get_if<MaskGen>(&impl.gen)) {
        auto base = m->base->center_at(j);
        if (!base) return std::nullopt;
        if (m->indicator.contains(j)) return base;
        return CenterElement(impl.algebra,
                             std::vector<Complex>(static_cast<size_t>(impl.algebra->block_count()),
                                                  Complex(0.0, 0.0)));
    }
    return std::nullopt;
}

std::shared_ptr<const TrigPolynomial> central_design(const AlgebraPtr& algebra,
                                                     const std::vector<Complex>& coeffs,
                                                     const std::vector<std::vector<double>>& angles) {
    std::vector<AlgebraElement> unitaries;
    for (const auto& a : angles) {
        std::vector<Complex> scalars;
        for (double theta : a) scalars.push_back(std::polar(1.0, theta));
        unitaries.push_back(CenterElement(algebra, std::move(scalars)).to_element());
    }
    return std::make_shared<const TrigPolynomial>(coeffs, std::move(unitaries));
}

}  // namespace

AlgebraElement WeightSequence::at(std::int64_t j) const {
    if (j < 0) throw std::invalid_argument("weight index must be >= 0");
    return general_value(*impl_, j);
}

std::optional<CenterElement> WeightSequence::center_at(std::int64_t j) const {
    if (j < 0) throw std::invalid_argument("weight index must be >= 0");
    return central_value(*impl_, j);
}

WeightSequence WeightSequence::constant_one(const AlgebraPtr& algebra) {
    auto impl = std::make_shared<Impl>();
    impl->algebra = algebra;
    impl->kind = Kind::scalar;
    impl->bound = 1.0;
    impl->central = true;
    impl->constant_one = true;
    impl->gen = ScalarGen{{Complex(1.0, 0.0)}, {0.0}, PerturbationSchedule{}, 0};
    impl->design = central_design(algebra, {Complex(1.0, 0.0)},
                                  {std::vector<double>(static_cast<size_t>(algebra->block_count()), 0.0)});
    return WeightSequence(impl);
}

WeightSequence WeightSequence::from_trig(TrigPolynomial psi, PerturbationSchedule schedule,
                                         std::uint64_t seed) {
    schedule.validate();
    auto impl = std::make_shared<Impl>();
    impl->algebra = psi.algebra();
    impl->kind = schedule.type == PerturbationSchedule::Type::none ? Kind::trig : Kind::perturbed_trig;
    impl->bound = psi.coefficient_abs_sum() + schedule.delta(0);
    impl->central = false;
    auto shared = std::make_shared<const TrigPolynomial>(std::move(psi));
    impl->design = shared;
    impl->gen = TrigGen{shared, schedule, seed};
    return WeightSequence(impl);
}

WeightSequence WeightSequence::scalar(const AlgebraPtr& algebra, std::vector<Complex> coefficients,
                                      std::vector<double> angles, PerturbationSchedule schedule,
                                      std::uint64_t seed) {
    if (coefficients.empty() || coefficients.size() != angles.size())
        throw std::invalid_argument("scalar weights need matching coefficient/angle lists");
    schedule.validate();
    auto impl = std::make_shared<Impl>();
    impl->algebra = algebra;
    impl->kind = Kind::scalar;
    double abs_sum = 0.0;
    for (Complex z : coefficients) abs_sum += std::abs(z);
    impl->bound = abs_sum + schedule.delta(0);
    impl->central = true;
    std::vector<std::vector<double>> block_angles;
    for (double theta : angles)
        block_angles.emplace_back(static_cast<size_t>(algebra->block_count()), theta);
    impl->design = central_design(algebra, coefficients, block_angles);
    impl->gen = ScalarGen{std::move(coefficients), std::move(angles), schedule, seed};
    return WeightSequence(impl);
}

WeightSequence make_central_besicovitch(const AlgebraPtr& algebra,
                                        std::vector<Complex> coefficients,
                                        std::vector<std::vector<double>> phase_angles,
                                        PerturbationSchedule schedule, std::uint64_t seed) {
    if (coefficients.empty() || coefficients.size() != phase_angles.size())
        throw std::invalid_argument("central weights need matching coefficient/phase lists");
    for (const auto& a : phase_angles)
        if (static_cast<int>(a.size()) != algebra->block_count())
            throw std::invalid_argument("central weights need one phase angle per block");
    schedule.validate();
    auto impl = std::make_shared<WeightSequence::Impl>();
    impl->algebra = algebra;
    impl->kind = WeightSequence::Kind::central_scalar;
    double abs_sum = 0.0;
    for (Complex z : coefficients) abs_sum += std::abs(z);
    impl->bound = abs_sum + schedule.delta(0);
    impl->central = true;
    impl->design = central_design(algebra, coefficients, phase_angles);
    impl->gen = CentralGen{std::move(coefficients), std::move(phase_angles), schedule, seed};
    return WeightSequence(impl);
}

WeightSequence mask_by_indicator(const WeightSequence& b, Subsequence k) {
    auto impl = std::make_shared<WeightSequence::Impl>();
    impl->algebra = b.algebra();
    impl->kind = WeightSequence::Kind::indicator_masked;
    impl->bound = b.bound();
    impl->central = b.central();
    impl->design = nullptr;
    impl->gen = MaskGen{std::make_shared<const WeightSequence>(b), std::move(k)};
    return WeightSequence(impl);
}

double besicovitch_error(const WeightSequence& b, const TrigPolynomial& psi, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("besicovitch_error needs n >= 1");
    double total = 0.0;
    for (std::int64_t j = 0; j < n; ++j) total += operator_norm(b.at(j) - psi.eval(j));
    return total / static_cast<double>(n);
}

}  // namespace ergolab
