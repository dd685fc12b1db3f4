#ifndef ERGOLAB_ALGEBRA_HPP
#define ERGOLAB_ALGEBRA_HPP

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ergolab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealFunction = std::function<double(double)>;

/// Finite direct sum of full complex matrix blocks with a weighted trace:
/// trace(x) = sum_i w_i * tr(x_i).  Weights need not be 1, so the trace is
/// faithful and tracial but not normalized.
class TracialAlgebra {
public:
    TracialAlgebra(std::vector<int> block_dims, std::vector<double> trace_weights);

    int block_count() const { return static_cast<int>(dims_.size()); }
    int block_dim(int b) const { return dims_[static_cast<size_t>(b)]; }
    double trace_weight(int b) const { return weights_[static_cast<size_t>(b)]; }
    const std::vector<int>& block_dims() const { return dims_; }
    const std::vector<double>& trace_weights() const { return weights_; }

    /// tau(1) = sum_i w_i * dim_i
    double total_trace() const { return total_trace_; }
    int total_dim() const { return total_dim_; }
    /// Dimension of the algebra as a vector space, sum_i dim_i^2.
    int coordinate_dim() const { return coordinate_dim_; }
    double min_weight() const { return min_weight_; }

    bool operator==(const TracialAlgebra& other) const {
        return dims_ == other.dims_ && weights_ == other.weights_;
    }

private:
    std::vector<int> dims_;
    std::vector<double> weights_;
    double total_trace_ = 0.0;
    int total_dim_ = 0;
    int coordinate_dim_ = 0;
    double min_weight_ = 0.0;
};

using AlgebraPtr = std::shared_ptr<const TracialAlgebra>;

AlgebraPtr make_algebra(std::vector<int> block_dims, std::vector<double> trace_weights);

/// One complex square matrix per block.  Value type: arithmetic returns new
/// elements, nothing is mutated in place after construction.
class AlgebraElement {
public:
    AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks);

    static AlgebraElement zero(const AlgebraPtr& algebra);
    static AlgebraElement identity(const AlgebraPtr& algebra);

    const AlgebraPtr& algebra() const { return algebra_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const Matrix& block(int b) const { return blocks_[static_cast<size_t>(b)]; }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    AlgebraElement adjoint() const;
    bool same_algebra(const AlgebraElement& other) const;

    AlgebraElement operator+(const AlgebraElement& rhs) const;
    AlgebraElement operator-(const AlgebraElement& rhs) const;
    AlgebraElement operator*(const AlgebraElement& rhs) const;
    AlgebraElement operator-() const;
    AlgebraElement scaled(Complex c) const;

private:
    AlgebraPtr algebra_;
    std::vector<Matrix> blocks_;
};

inline AlgebraElement operator*(Complex c, const AlgebraElement& x) { return x.scaled(c); }
inline AlgebraElement operator*(double c, const AlgebraElement& x) { return x.scaled(Complex(c, 0.0)); }

Complex trace(const AlgebraElement& x);
double operator_norm(const AlgebraElement& x);
/// ||x||_1 = trace(|x|)
double trace_norm(const AlgebraElement& x);
double frobenius_norm(const AlgebraElement& x);

bool is_self_adjoint(const AlgebraElement& x, double tol = 1e-10);
AlgebraElement real_part(const AlgebraElement& x);
AlgebraElement imag_part(const AlgebraElement& x);
/// |x| = (x* x)^(1/2)
AlgebraElement abs(const AlgebraElement& x);
AlgebraElement positive_part(const AlgebraElement& x);
AlgebraElement negative_part(const AlgebraElement& x);

/// Smallest eigenvalue across blocks of the symmetrized input.
double min_eigenvalue(const AlgebraElement& x);

/// x <= y on self-adjoint elements: min eigenvalue of y - x >= -tol.
bool order_leq(const AlgebraElement& x, const AlgebraElement& y, double tol = 1e-10);

/// Per-block singular values paired with the block trace weight, unsorted.
std::vector<std::pair<double, double>> singular_values_with_masses(const AlgebraElement& x);

/// Self-adjoint idempotent, validated at construction.
class Projection {
public:
    static Projection checked(AlgebraElement e, double tol = 1e-10);
    static Projection identity(const AlgebraPtr& algebra);
    static Projection zero(const AlgebraPtr& algebra);
    /// Builds sum_k q_k q_k* from per-block matrices whose columns are
    /// orthonormal (columns may be empty for blocks outside the range).
    static Projection from_orthonormal_columns(const AlgebraPtr& algebra,
                                               const std::vector<Matrix>& columns);

    const AlgebraElement& element() const { return element_; }
    const AlgebraPtr& algebra() const { return element_.algebra(); }
    Projection complement() const;
    /// tau(e)
    double trace_mass() const;
    /// tau(1 - e)
    double trace_defect() const;

private:
    explicit Projection(AlgebraElement e) : element_(std::move(e)) {}
    AlgebraElement element_;
};

/// Meet e ^ f: projection onto range(e) n range(f), computed blockwise by a
/// rank-revealing decomposition with threshold 1e-10 on principal angles.
Projection meet(const Projection& e, const Projection& f);
Projection meet(const std::vector<Projection>& ps);

/// Compression e x e.
AlgebraElement compress(const Projection& e, const AlgebraElement& x);
double compressed_norm(const Projection& e, const AlgebraElement& x);
/// ||x e||
double one_sided_compressed_norm(const Projection& e, const AlgebraElement& x);

/// Element of the center: one scalar per block, z = sum_i scalar_i * 1_i.
/// Commutes exactly with everything in the same algebra.
class CenterElement {
public:
    CenterElement(AlgebraPtr algebra, std::vector<Complex> scalars);

    const AlgebraPtr& algebra() const { return algebra_; }
    const std::vector<Complex>& scalars() const { return scalars_; }
    AlgebraElement to_element() const;

    CenterElement real() const;
    CenterElement imag() const;
    CenterElement operator+(const CenterElement& rhs) const;
    CenterElement operator+(double c) const;
    CenterElement scaled(Complex c) const;
    /// max_i |scalar_i| = operator norm of the embedded element
    double norm() const;

private:
    AlgebraPtr algebra_;
    std::vector<Complex> scalars_;
};

/// z * x with z central: scales block i of x by scalar_i.  Exact.
AlgebraElement operator*(const CenterElement& z, const AlgebraElement& x);

struct SpectralDecomposition {
    std::vector<double> eigenvalues;        // descending, tol-clustered
    std::vector<Projection> projections;    // mutually orthogonal, sum to 1
    std::vector<double> trace_masses;       // tau of each projection
};

/// Spectral decomposition of a self-adjoint element.  Eigenvalues closer than
/// tol are merged into one eigenprojection; tol < 0 selects the default
/// 1e-8 * ||x||.
SpectralDecomposition spectral_decomposition(const AlgebraElement& x, double tol = -1.0);

/// f(x) for self-adjoint x via eigendecomposition per block (no clustering).
/// Throws std::domain_error if f is not finite on the spectrum.
AlgebraElement functional_calculus(const RealFunction& f, const AlgebraElement& x);

/// Spectral projection chi_(s, inf)(x) for self-adjoint x.
Projection spectral_projection_above(const AlgebraElement& x, double s);
/// Spectral projection chi_[lo, hi](x) for self-adjoint x.
Projection spectral_projection_interval(const AlgebraElement& x, double lo, double hi);

}  // namespace ergolab

#endif  // ERGOLAB_ALGEBRA_HPP
