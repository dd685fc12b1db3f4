#include "ergolab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergolab {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed to converge");
    return es;
}

}  // namespace

TracialAlgebra::TracialAlgebra(std::vector<int> block_dims, std::vector<double> trace_weights)
    : dims_(std::move(block_dims)), weights_(std::move(trace_weights)) {
    require(!dims_.empty(), "algebra needs at least one block");
    require(dims_.size() == weights_.size(), "block_dims and trace_weights must have equal length");
    for (size_t i = 0; i < dims_.size(); ++i) {
        require(dims_[i] >= 1, "block dimension must be >= 1");
        require(weights_[i] > 0.0 && std::isfinite(weights_[i]), "trace weight must be positive and finite");
    }
    min_weight_ = weights_[0];
    for (size_t i = 0; i < dims_.size(); ++i) {
        total_trace_ += weights_[i] * dims_[i];
        total_dim_ += dims_[i];
        coordinate_dim_ += dims_[i] * dims_[i];
        min_weight_ = std::min(min_weight_, weights_[i]);
    }
}

AlgebraPtr make_algebra(std::vector<int> block_dims, std::vector<double> trace_weights) {
    return std::make_shared<const TracialAlgebra>(std::move(block_dims), std::move(trace_weights));
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    require(algebra_ != nullptr, "element needs an algebra");
    require(static_cast<int>(blocks_.size()) == algebra_->block_count(),
            "element block count does not match the algebra");
    for (int b = 0; b < algebra_->block_count(); ++b) {
        const Matrix& m = blocks_[static_cast<size_t>(b)];
        require(m.rows() == algebra_->block_dim(b) && m.cols() == algebra_->block_dim(b),
                "block shape does not match the algebra");
    }
}

AlgebraElement AlgebraElement::zero(const AlgebraPtr& algebra) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra->block_count(); ++b)
        blocks.push_back(Matrix::Zero(algebra->block_dim(b), algebra->block_dim(b)));
    return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraPtr& algebra) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra->block_count(); ++b)
        blocks.push_back(Matrix::Identity(algebra->block_dim(b), algebra->block_dim(b)));
    return AlgebraElement(algebra, std::move(blocks));
}

bool AlgebraElement::same_algebra(const AlgebraElement& other) const {
    return algebra_ == other.algebra_ || *algebra_ == *other.algebra_;
}

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (const Matrix& m : blocks_) blocks.push_back(m.adjoint());
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& rhs) const {
    require(same_algebra(rhs), "algebra mismatch in +");
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] + rhs.blocks_[b]);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& rhs) const {
    require(same_algebra(rhs), "algebra mismatch in -");
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] - rhs.blocks_[b]);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& rhs) const {
    require(same_algebra(rhs), "algebra mismatch in *");
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] * rhs.blocks_[b]);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-() const { return scaled(Complex(-1.0, 0.0)); }

AlgebraElement AlgebraElement::scaled(Complex c) const {
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (const Matrix& m : blocks_) blocks.push_back(c * m);
    return AlgebraElement(algebra_, std::move(blocks));
}

Complex trace(const AlgebraElement& x) {
    Complex t(0.0, 0.0);
    for (int b = 0; b < x.block_count(); ++b)
        t += x.algebra()->trace_weight(b) * x.block(b).trace();
    return t;
}

double operator_norm(const AlgebraElement& x) {
    double n = 0.0;
    for (int b = 0; b < x.block_count(); ++b) {
        const Matrix& m = x.block(b);
        if (m.cwiseAbs().maxCoeff() == 0.0) continue;
        Eigen::JacobiSVD<Matrix> svd(m);
        n = std::max(n, svd.singularValues()(0));
    }
    return n;
}

std::vector<std::pair<double, double>> singular_values_with_masses(const AlgebraElement& x) {
    std::vector<std::pair<double, double>> out;
    for (int b = 0; b < x.block_count(); ++b) {
        Eigen::JacobiSVD<Matrix> svd(x.block(b));
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            out.emplace_back(sv(i), x.algebra()->trace_weight(b));
    }
    return out;
}

double trace_norm(const AlgebraElement& x) {
    double n = 0.0;
    for (const auto& [sigma, mass] : singular_values_with_masses(x)) n += sigma * mass;
    return n;
}

double frobenius_norm(const AlgebraElement& x) {
    double s = 0.0;
    for (int b = 0; b < x.block_count(); ++b)
        s += x.algebra()->trace_weight(b) * x.block(b).squaredNorm();
    return std::sqrt(s);
}

bool is_self_adjoint(const AlgebraElement& x, double tol) {
    return operator_norm(x - x.adjoint()) <= tol;
}

AlgebraElement real_part(const AlgebraElement& x) {
    return (x + x.adjoint()).scaled(Complex(0.5, 0.0));
}

AlgebraElement imag_part(const AlgebraElement& x) {
    return (x - x.adjoint()).scaled(Complex(0.0, -0.5));
}

AlgebraElement abs(const AlgebraElement& x) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < x.block_count(); ++b) {
        Eigen::JacobiSVD<Matrix> svd(x.block(b), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        blocks.push_back(svd.matrixV() * sv.asDiagonal().toDenseMatrix().cast<Complex>() *
                         svd.matrixV().adjoint());
    }
    return AlgebraElement(x.algebra(), std::move(blocks));
}

AlgebraElement positive_part(const AlgebraElement& x) {
    return functional_calculus([](double t) { return t > 0.0 ? t : 0.0; }, x);
}

AlgebraElement negative_part(const AlgebraElement& x) {
    return functional_calculus([](double t) { return t < 0.0 ? -t : 0.0; }, x);
}

double min_eigenvalue(const AlgebraElement& x) {
    double lo = std::numeric_limits<double>::infinity();
    for (int b = 0; b < x.block_count(); ++b) {
        Matrix h = 0.5 * (x.block(b) + x.block(b).adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues()(0));
    }
    return lo;
}

bool order_leq(const AlgebraElement& x, const AlgebraElement& y, double tol) {
    return min_eigenvalue(y - x) >= -tol;
}

SpectralDecomposition spectral_decomposition(const AlgebraElement& x, double tol) {
    const double scale = operator_norm(x);
    if (tol < 0.0) tol = 1e-8 * scale;
    if (operator_norm(x - x.adjoint()) > std::max(tol, 1e-10))
        throw std::invalid_argument("spectral_decomposition requires a self-adjoint element");

    struct Entry {
        double value;
        int block;
        Eigen::VectorXcd vec;
    };
    std::vector<Entry> entries;
    for (int b = 0; b < x.block_count(); ++b) {
        auto es = eigensolve(x.block(b));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            entries.push_back({es.eigenvalues()(i), b, es.eigenvectors().col(i)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.value > b.value; });

    SpectralDecomposition out;
    size_t i = 0;
    while (i < entries.size()) {
        size_t j = i;
        // cluster eigenvalues within tol of the running representative
        while (j + 1 < entries.size() && entries[i].value - entries[j + 1].value <= tol) ++j;
        std::vector<Matrix> cols(static_cast<size_t>(x.block_count()));
        std::vector<int> counts(static_cast<size_t>(x.block_count()), 0);
        for (size_t k = i; k <= j; ++k) ++counts[static_cast<size_t>(entries[k].block)];
        for (int b = 0; b < x.block_count(); ++b)
            cols[static_cast<size_t>(b)] = Matrix::Zero(x.algebra()->block_dim(b), counts[static_cast<size_t>(b)]);
        std::vector<int> filled(static_cast<size_t>(x.block_count()), 0);
        double value_sum = 0.0;
        for (size_t k = i; k <= j; ++k) {
            int b = entries[k].block;
            cols[static_cast<size_t>(b)].col(filled[static_cast<size_t>(b)]++) = entries[k].vec;
            value_sum += entries[k].value;
        }
        Projection e = Projection::from_orthonormal_columns(x.algebra(), cols);
        out.eigenvalues.push_back(value_sum / static_cast<double>(j - i + 1));
        out.trace_masses.push_back(e.trace_mass());
        out.projections.push_back(std::move(e));
        i = j + 1;
    }
    return out;
}

AlgebraElement functional_calculus(const RealFunction& f, const AlgebraElement& x) {
    const double scale = operator_norm(x);
    if (operator_norm(x - x.adjoint()) > std::max(1e-8 * scale, 1e-10))
        throw std::invalid_argument("functional_calculus requires a self-adjoint element");
    std::vector<Matrix> blocks;
    for (int b = 0; b < x.block_count(); ++b) {
        auto es = eigensolve(x.block(b));
        Eigen::VectorXd vals(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            double fv = f(es.eigenvalues()(i));
            if (!std::isfinite(fv))
                throw std::domain_error("function undefined at eigenvalue " +
                                        std::to_string(es.eigenvalues()(i)));
            vals(i) = fv;
        }
        blocks.push_back(es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() *
                         es.eigenvectors().adjoint());
    }
    return AlgebraElement(x.algebra(), std::move(blocks));
}

Projection spectral_projection_above(const AlgebraElement& x, double s) {
    std::vector<Matrix> cols;
    for (int b = 0; b < x.block_count(); ++b) {
        auto es = eigensolve(x.block(b));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > s) keep.push_back(i);
        Matrix q(x.algebra()->block_dim(b), static_cast<Eigen::Index>(keep.size()));
        for (size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
        cols.push_back(std::move(q));
    }
    return Projection::from_orthonormal_columns(x.algebra(), cols);
}

Projection spectral_projection_interval(const AlgebraElement& x, double lo, double hi) {
    std::vector<Matrix> cols;
    for (int b = 0; b < x.block_count(); ++b) {
        auto es = eigensolve(x.block(b));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) >= lo && es.eigenvalues()(i) <= hi) keep.push_back(i);
        Matrix q(x.algebra()->block_dim(b), static_cast<Eigen::Index>(keep.size()));
        for (size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
        cols.push_back(std::move(q));
    }
    return Projection::from_orthonormal_columns(x.algebra(), cols);
}

Projection Projection::checked(AlgebraElement e, double tol) {
    for (int b = 0; b < e.block_count(); ++b) {
        const Matrix& m = e.block(b);
        if (((m * m - m).cwiseAbs().maxCoeff() > tol) || ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol))
            throw std::invalid_argument("not a projection within tolerance");
    }
    return Projection(std::move(e));
}

Projection Projection::identity(const AlgebraPtr& algebra) {
    return Projection(AlgebraElement::identity(algebra));
}

Projection Projection::zero(const AlgebraPtr& algebra) {
    return Projection(AlgebraElement::zero(algebra));
}

Projection Projection::from_orthonormal_columns(const AlgebraPtr& algebra,
                                                const std::vector<Matrix>& columns) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra->block_count(); ++b) {
        const Matrix& q = columns[static_cast<size_t>(b)];
        if (q.cols() == 0)
            blocks.push_back(Matrix::Zero(algebra->block_dim(b), algebra->block_dim(b)));
        else
            blocks.push_back(q * q.adjoint());
    }
    return Projection(AlgebraElement(algebra, std::move(blocks)));
}

Projection Projection::complement() const {
    return Projection(AlgebraElement::identity(algebra()) - element_);
}

double Projection::trace_mass() const { return trace(element_).real(); }

double Projection::trace_defect() const { return algebra()->total_trace() - trace_mass(); }

namespace {

// Orthonormal basis of the range of a projection block (eigenvectors with
// eigenvalue above 1/2).
Matrix range_basis(const Matrix& p) {
    auto es = eigensolve(p);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    Matrix q(p.rows(), static_cast<Eigen::Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    return q;
}

}  // namespace

Projection meet(const Projection& e, const Projection& f) {
    if (!e.element().same_algebra(f.element()))
        throw std::invalid_argument("meet of projections from different algebras");
    const AlgebraPtr& alg = e.algebra();
    std::vector<Matrix> cols;
    for (int b = 0; b < alg->block_count(); ++b) {
        Matrix qe = range_basis(e.element().block(b));
        Matrix qf = range_basis(f.element().block(b));
        if (qe.cols() == 0 || qf.cols() == 0) {
            cols.push_back(Matrix(alg->block_dim(b), 0));
            continue;
        }
        // principal angles: singular values of qe* qf equal to 1 mark the
        // intersection of the two ranges
        Eigen::JacobiSVD<Matrix> svd(qe.adjoint() * qf, Eigen::ComputeFullU);
        const auto& sv = svd.singularValues();
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) >= 1.0 - 1e-10) keep.push_back(i);
        Matrix q(alg->block_dim(b), static_cast<Eigen::Index>(keep.size()));
        for (size_t k = 0; k < keep.size(); ++k)
            q.col(static_cast<Eigen::Index>(k)) = qe * svd.matrixU().col(keep[k]);
        // re-orthonormalize to keep the idempotency defect near machine eps
        if (q.cols() > 0) {
            Eigen::HouseholderQR<Matrix> qr(q);
            Matrix thin = qr.householderQ() * Matrix::Identity(q.rows(), q.cols());
            q = thin;
        }
        cols.push_back(std::move(q));
    }
    return Projection::from_orthonormal_columns(alg, cols);
}

Projection meet(const std::vector<Projection>& ps) {
    if (ps.empty()) throw std::invalid_argument("meet of an empty set");
    Projection acc = ps.front();
    for (size_t i = 1; i < ps.size(); ++i) acc = meet(acc, ps[i]);
    return acc;
}

AlgebraElement compress(const Projection& e, const AlgebraElement& x) {
    return e.element() * x * e.element();
}

double compressed_norm(const Projection& e, const AlgebraElement& x) {
    return operator_norm(compress(e, x));
}

double one_sided_compressed_norm(const Projection& e, const AlgebraElement& x) {
    return operator_norm(x * e.element());
}

CenterElement::CenterElement(AlgebraPtr algebra, std::vector<Complex> scalars)
    : algebra_(std::move(algebra)), scalars_(std::move(scalars)) {
    require(algebra_ != nullptr, "center element needs an algebra");
    require(static_cast<int>(scalars_.size()) == algebra_->block_count(),
            "center element needs one scalar per block");
}

AlgebraElement CenterElement::to_element() const {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra_->block_count(); ++b)
        blocks.push_back(scalars_[static_cast<size_t>(b)] *
                         Matrix::Identity(algebra_->block_dim(b), algebra_->block_dim(b)));
    return AlgebraElement(algebra_, std::move(blocks));
}

CenterElement CenterElement::real() const {
    std::vector<Complex> s;
    for (Complex z : scalars_) s.emplace_back(z.real(), 0.0);
    return CenterElement(algebra_, std::move(s));
}

CenterElement CenterElement::imag() const {
    std::vector<Complex> s;
    for (Complex z : scalars_) s.emplace_back(z.imag(), 0.0);
    return CenterElement(algebra_, std::move(s));
}

CenterElement CenterElement::operator+(const CenterElement& rhs) const {
    std::vector<Complex> s;
    for (size_t i = 0; i < scalars_.size(); ++i) s.push_back(scalars_[i] + rhs.scalars_[i]);
    return CenterElement(algebra_, std::move(s));
}

CenterElement CenterElement::operator+(double c) const {
    std::vector<Complex> s;
    for (Complex z : scalars_) s.push_back(z + c);
    return CenterElement(algebra_, std::move(s));
}

CenterElement CenterElement::scaled(Complex c) const {
    std::vector<Complex> s;
    for (Complex z : scalars_) s.push_back(c * z);
    return CenterElement(algebra_, std::move(s));
}

double CenterElement::norm() const {
    double n = 0.0;
    for (Complex z : scalars_) n = std::max(n, std::abs(z));
    return n;
}

AlgebraElement operator*(const CenterElement& z, const AlgebraElement& x) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < x.block_count(); ++b)
        blocks.push_back(z.scalars()[static_cast<size_t>(b)] * x.block(b));
    return AlgebraElement(x.algebra(), std::move(blocks));
}

}  // namespace ergolab
