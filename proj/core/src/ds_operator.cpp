#include "ergolab/ds_operator.hpp"

#include "ergolab/random.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <variant>

namespace ergolab {

namespace {

struct UnitaryRepr {
    AlgebraElement u;
};
struct KrausRepr {
    std::vector<AlgebraElement> kraus;
};
struct PermutationRepr {
    std::vector<int> perm;
};
struct MixtureRepr {
    std::vector<std::pair<double, DsOperator>> parts;
};
struct IdentityRepr {};

using Repr = std::variant<IdentityRepr, UnitaryRepr, KrausRepr, PermutationRepr, MixtureRepr>;

}  // namespace

struct DsOperator::Impl {
    AlgebraPtr algebra;
    Repr repr;
    bool structurally_checked = true;

    mutable std::mutex cache_mutex;
    mutable std::optional<Matrix> coord_matrix;
    mutable std::vector<Matrix> coord_binary_powers;  // [i] = M^(2^i)
    mutable std::optional<DsCertificate> certificate;
};

double DsCertificate::max_defect() const {
    return std::max({positivity_defect, sup_norm_defect, trace_norm_defect, unitality_defect,
                     trace_defect});
}

Eigen::VectorXcd coordinate_vector(const AlgebraElement& x) {
    Eigen::VectorXcd v(x.algebra()->coordinate_dim());
    Eigen::Index off = 0;
    for (int b = 0; b < x.block_count(); ++b) {
        const int d = x.algebra()->block_dim(b);
        v.segment(off, d * d) = Eigen::Map<const Eigen::VectorXcd>(x.block(b).data(), d * d);
        off += d * d;
    }
    return v;
}

AlgebraElement element_from_coordinates(const AlgebraPtr& algebra, const Eigen::VectorXcd& v) {
    std::vector<Matrix> blocks;
    Eigen::Index off = 0;
    for (int b = 0; b < algebra->block_count(); ++b) {
        const int d = algebra->block_dim(b);
        blocks.push_back(Eigen::Map<const Matrix>(v.segment(off, d * d).data(), d, d));
        off += d * d;
    }
    return AlgebraElement(algebra, std::move(blocks));
}

DsOperator DsOperator::identity(const AlgebraPtr& algebra) {
    auto impl = std::make_shared<Impl>();
    impl->algebra = algebra;
    impl->repr = IdentityRepr{};
    return DsOperator(std::move(impl));
}

DsOperator DsOperator::from_unitary(AlgebraElement u) {
    const AlgebraElement one = AlgebraElement::identity(u.algebra());
    if (operator_norm(u.adjoint() * u - one) > 1e-10 || operator_norm(u * u.adjoint() - one) > 1e-10)
        throw std::invalid_argument("from_unitary requires a unitary element");
    auto impl = std::make_shared<Impl>();
    impl->algebra = u.algebra();
    impl->repr = UnitaryRepr{std::move(u)};
    return DsOperator(std::move(impl));
}

DsOperator DsOperator::from_kraus(std::vector<AlgebraElement> kraus) {
    if (kraus.empty()) throw std::invalid_argument("from_kraus needs at least one operator");
    const AlgebraPtr alg = kraus.front().algebra();
    AlgebraElement left = AlgebraElement::zero(alg);
    AlgebraElement right = AlgebraElement::zero(alg);
    for (const auto& k : kraus) {
        if (!k.same_algebra(kraus.front())) throw std::invalid_argument("Kraus algebra mismatch");
        left = left + k.adjoint() * k;
        right = right + k * k.adjoint();
    }
    const AlgebraElement one = AlgebraElement::identity(alg);
    const double d1 = operator_norm(left - one);
    const double d2 = operator_norm(right - one);
    if (d1 > 1e-9 || d2 > 1e-9)
        throw std::invalid_argument("Kraus sums are not doubly stochastic: defects " +
                                    std::to_string(d1) + ", " + std::to_string(d2));
    auto impl = std::make_shared<Impl>();
    impl->algebra = alg;
    impl->repr = KrausRepr{std::move(kraus)};
    return DsOperator(std::move(impl));
}

DsOperator DsOperator::from_kraus_unchecked(std::vector<AlgebraElement> kraus) {
    if (kraus.empty()) throw std::invalid_argument("from_kraus_unchecked needs at least one operator");
    auto impl = std::make_shared<Impl>();
    impl->algebra = kraus.front().algebra();
    impl->repr = KrausRepr{std::move(kraus)};
    impl->structurally_checked = false;
    return DsOperator(std::move(impl));
}

DsOperator DsOperator::from_block_permutation(const AlgebraPtr& algebra, std::vector<int> perm) {
    const int m = algebra->block_count();
    if (static_cast<int>(perm.size()) != m)
        throw std::invalid_argument("permutation length must equal the block count");
    std::vector<bool> seen(static_cast<size_t>(m), false);
    for (int b = 0; b < m; ++b) {
        const int t = perm[static_cast<size_t>(b)];
        if (t < 0 || t >= m || seen[static_cast<size_t>(t)])
            throw std::invalid_argument("not a permutation of the blocks");
        seen[static_cast<size_t>(t)] = true;
        if (algebra->block_dim(b) != algebra->block_dim(t) ||
            algebra->trace_weight(b) != algebra->trace_weight(t))
            throw std::invalid_argument("permuted blocks must share dimension and trace weight");
    }
    auto impl = std::make_shared<Impl>();
    impl->algebra = algebra;
    impl->repr = PermutationRepr{std::move(perm)};
    return DsOperator(std::move(impl));
}

DsOperator DsOperator::mixture(std::vector<std::pair<double, DsOperator>> parts) {
    if (parts.empty()) throw std::invalid_argument("mixture needs at least one component");
    double total = 0.0;
    for (const auto& [p, op] : parts) {
        if (p < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
        if (!(op.algebra() == parts.front().second.algebra() ||
              *op.algebra() == *parts.front().second.algebra()))
            throw std::invalid_argument("mixture components live on different algebras");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mixture weights must sum to 1");
    auto impl = std::make_shared<Impl>();
    impl->algebra = parts.front().second.algebra();
    impl->repr = MixtureRepr{std::move(parts)};
    return DsOperator(std::move(impl));
}

const AlgebraPtr& DsOperator::algebra() const { return impl_->algebra; }

AlgebraElement DsOperator::apply(const AlgebraElement& x) const {
    if (!(x.algebra() == impl_->algebra || *x.algebra() == *impl_->algebra))
        throw std::invalid_argument("element does not belong to the operator's algebra");
    return std::visit(
        [&](const auto& repr) -> AlgebraElement {
            using R = std::decay_t<decltype(repr)>;
            if constexpr (std::is_same_v<R, IdentityRepr>) {
                return x;
            } else if constexpr (std::is_same_v<R, UnitaryRepr>) {
                return repr.u.adjoint() * x * repr.u;
            } else if constexpr (std::is_same_v<R, KrausRepr>) {
                AlgebraElement out = AlgebraElement::zero(impl_->algebra);
                for (const auto& k : repr.kraus) out = out + k * x * k.adjoint();
                return out;
            } else if constexpr (std::is_same_v<R, PermutationRepr>) {
                std::vector<Matrix> blocks(static_cast<size_t>(x.block_count()));
                for (int b = 0; b < x.block_count(); ++b)
                    blocks[static_cast<size_t>(repr.perm[static_cast<size_t>(b)])] = x.block(b);
                return AlgebraElement(impl_->algebra, std::move(blocks));
            } else {
                AlgebraElement out = AlgebraElement::zero(impl_->algebra);
                for (const auto& [p, op] : repr.parts) out = out + p * op.apply(x);
                return out;
            }
        },
        impl_->repr);
}

const Matrix& DsOperator::coordinate_matrix() const {
    std::scoped_lock lock(impl_->cache_mutex);
    if (!impl_->coord_matrix) {
        const int dim = impl_->algebra->coordinate_dim();
        Matrix m(dim, dim);
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
        for (int c = 0; c < dim; ++c) {
            basis(c) = Complex(1.0, 0.0);
            m.col(c) = coordinate_vector(apply(element_from_coordinates(impl_->algebra, basis)));
            basis(c) = Complex(0.0, 0.0);
        }
        impl_->coord_matrix = std::move(m);
    }
    return *impl_->coord_matrix;
}

AlgebraElement DsOperator::apply_power(std::int64_t j, const AlgebraElement& x) const {
    if (j < 0) throw std::invalid_argument("apply_power needs j >= 0");
    if (j == 0) return x;
    if (std::holds_alternative<IdentityRepr>(impl_->repr)) return x;
    if (const auto* u = std::get_if<UnitaryRepr>(&impl_->repr)) {
        // binary power of the unitary, then conjugate once
        AlgebraElement base = u->u;
        std::optional<AlgebraElement> acc;
        std::int64_t e = j;
        while (e > 0) {
            if (e & 1) acc = acc ? (*acc * base) : base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return acc->adjoint() * x * (*acc);
    }
    if (const auto* p = std::get_if<PermutationRepr>(&impl_->repr)) {
        const size_t m = p->perm.size();
        std::vector<int> acc(m), base = p->perm;
        std::iota(acc.begin(), acc.end(), 0);
        std::int64_t e = j;
        auto compose = [m](const std::vector<int>& f, const std::vector<int>& g) {
            std::vector<int> h(m);
            for (size_t i = 0; i < m; ++i) h[i] = f[static_cast<size_t>(g[i])];
            return h;
        };
        while (e > 0) {
            if (e & 1) acc = compose(base, acc);
            e >>= 1;
            if (e > 0) base = compose(base, base);
        }
        std::vector<Matrix> blocks(m);
        for (size_t b = 0; b < m; ++b) blocks[static_cast<size_t>(acc[b])] = x.block(static_cast<int>(b));
        return AlgebraElement(impl_->algebra, std::move(blocks));
    }
    if (j <= 3) {
        AlgebraElement out = x;
        for (std::int64_t i = 0; i < j; ++i) out = apply(out);
        return out;
    }
    // generic route: multiply vec(x) through the cached binary powers of the
    // coordinate matrix, low bit first
    coordinate_matrix();
    Eigen::VectorXcd v = coordinate_vector(x);
    std::int64_t e = j;
    int bit = 0;
    std::scoped_lock lock(impl_->cache_mutex);
    while (e > 0) {
        while (static_cast<int>(impl_->coord_binary_powers.size()) <= bit) {
            if (impl_->coord_binary_powers.empty())
                impl_->coord_binary_powers.push_back(*impl_->coord_matrix);
            else
                impl_->coord_binary_powers.push_back(impl_->coord_binary_powers.back() *
                                                     impl_->coord_binary_powers.back());
        }
        if (e & 1) v = impl_->coord_binary_powers[static_cast<size_t>(bit)] * v;
        e >>= 1;
        ++bit;
    }
    return element_from_coordinates(impl_->algebra, v);
}

DsCertificate DsOperator::verify(int samples, double tol, std::uint64_t seed) const {
    if (samples < 1) throw std::invalid_argument("verify needs samples >= 1");
    Rng rng(seed);
    DsCertificate cert;
    cert.samples = samples;
    cert.tolerance = tol;

    const AlgebraElement one = AlgebraElement::identity(impl_->algebra);
    cert.unitality_defect = std::max(0.0, -min_eigenvalue(one - apply(one)));

    std::optional<AlgebraElement> witness;
    double worst = -1.0;
    auto note = [&](double defect, const AlgebraElement& x) {
        if (defect > worst) {
            worst = defect;
            witness = x;
        }
    };

    for (int s = 0; s < samples; ++s) {
        AlgebraElement pos = random_positive(impl_->algebra, rng);
        AlgebraElement tpos = apply(pos);
        double d = std::max(0.0, -min_eigenvalue(tpos));
        cert.positivity_defect = std::max(cert.positivity_defect, d);
        note(d, pos);
        d = std::max(0.0, trace(tpos).real() - trace(pos).real());
        cert.trace_defect = std::max(cert.trace_defect, d);
        note(d, pos);

        AlgebraElement gen = random_element(impl_->algebra, rng);
        AlgebraElement tgen = apply(gen);
        d = std::max(0.0, operator_norm(tgen) - operator_norm(gen));
        cert.sup_norm_defect = std::max(cert.sup_norm_defect, d);
        note(d, gen);
        d = std::max(0.0, trace_norm(tgen) - trace_norm(gen));
        cert.trace_norm_defect = std::max(cert.trace_norm_defect, d);
        note(d, gen);
    }
    note(cert.unitality_defect, one);

    if (!cert.passed()) {
        throw certification_error(
            "Dunford-Schwartz certification failed: max defect " + std::to_string(cert.max_defect()) +
                " exceeds tolerance " + std::to_string(tol),
            witness ? *witness : one);
    }
    {
        std::scoped_lock lock(impl_->cache_mutex);
        impl_->certificate = cert;
    }
    return cert;
}

std::optional<DsCertificate> DsOperator::certificate() const {
    std::scoped_lock lock(impl_->cache_mutex);
    return impl_->certificate;
}

PowerIterator DsOperator::power_iterator() const { return PowerIterator(*this); }

std::string DsOperator::describe() const {
    return std::visit(
        [&](const auto& repr) -> std::string {
            using R = std::decay_t<decltype(repr)>;
            if constexpr (std::is_same_v<R, IdentityRepr>) return "identity";
            else if constexpr (std::is_same_v<R, UnitaryRepr>) return "unitary-conjugation";
            else if constexpr (std::is_same_v<R, KrausRepr>)
                return "kraus[" + std::to_string(repr.kraus.size()) + "]";
            else if constexpr (std::is_same_v<R, PermutationRepr>) return "block-permutation";
            else return "mixture[" + std::to_string(repr.parts.size()) + "]";
        },
        impl_->repr);
}

PowerIterator::PowerIterator(DsOperator op) : op_(std::move(op)) {
    if (const auto* u = std::get_if<UnitaryRepr>(&op_.impl_->repr))
        unitary_power_ = AlgebraElement::identity(u->u.algebra());
    else if (!std::holds_alternative<IdentityRepr>(op_.impl_->repr))
        matrix_power_ = Matrix::Identity(op_.algebra()->coordinate_dim(),
                                         op_.algebra()->coordinate_dim());
}

AlgebraElement PowerIterator::apply(const AlgebraElement& w) const {
    if (unitary_power_) return unitary_power_->adjoint() * w * (*unitary_power_);
    if (matrix_power_)
        return element_from_coordinates(w.algebra(), (*matrix_power_) * coordinate_vector(w));
    return w;  // identity operator
}

void PowerIterator::advance() {
    ++index_;
    if (unitary_power_) {
        const auto& u = std::get<UnitaryRepr>(op_.impl_->repr).u;
        *unitary_power_ = *unitary_power_ * u;
        if (index_ % 256 == 0) {
            // refresh from binary exponentiation, an independent arithmetic path
            AlgebraElement base = u;
            std::optional<AlgebraElement> acc;
            std::int64_t e = index_;
            while (e > 0) {
                if (e & 1) acc = acc ? (*acc * base) : base;
                e >>= 1;
                if (e > 0) base = base * base;
            }
            if (operator_norm(*unitary_power_ - *acc) > 1e-9)
                throw std::runtime_error("power iterate drift exceeded 1e-9");
            *unitary_power_ = *acc;
        }
    } else if (matrix_power_) {
        *matrix_power_ = op_.coordinate_matrix() * (*matrix_power_);
        if (index_ % 256 == 0) {
            Matrix fresh = Matrix::Identity(matrix_power_->rows(), matrix_power_->cols());
            // binary exponentiation against the cached squares
            {
                std::int64_t e = index_;
                Matrix base = op_.coordinate_matrix();
                while (e > 0) {
                    if (e & 1) fresh = base * fresh;
                    e >>= 1;
                    if (e > 0) base = base * base;
                }
            }
            const double defect = (fresh - *matrix_power_).cwiseAbs().maxCoeff();
            if (defect > 1e-9 * std::max(1.0, fresh.cwiseAbs().maxCoeff()))
                throw std::runtime_error("power iterate drift exceeded 1e-9");
            *matrix_power_ = std::move(fresh);
        }
    }
}

}  // namespace ergolab
