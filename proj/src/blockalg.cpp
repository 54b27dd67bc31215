#include "freeprod/blockalg.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <numeric>
#include <sstream>

namespace freeprod {

BlockAlgebra::BlockAlgebra(std::vector<int> block_dims, std::string label)
    : dims_(std::move(block_dims)), label_(std::move(label)) {
  if (dims_.empty()) throw ValidationError("algebra '" + label_ + "': no blocks");
  dim_ = 0;
  for (int d : dims_) {
    if (d < 1)
      throw ValidationError("algebra '" + label_ + "': block dimension " +
                            std::to_string(d) + " < 1");
    dim_ += d * d;
  }
}

AlgebraElement::AlgebraElement(AlgebraPtr parent, std::vector<Mat> blocks)
    : parent_(std::move(parent)), blocks_(std::move(blocks)) {
  const auto& dims = parent_->block_dims();
  if (blocks_.size() != dims.size())
    throw StructuralError("element of '" + parent_->label() +
                          "': wrong number of blocks");
  for (size_t b = 0; b < dims.size(); ++b) {
    if (blocks_[b].rows() != dims[b] || blocks_[b].cols() != dims[b])
      throw StructuralError("element of '" + parent_->label() + "': block " +
                            std::to_string(b) + " has wrong shape");
  }
}

AlgebraElement AlgebraElement::zero(AlgebraPtr parent) {
  std::vector<Mat> blocks;
  for (int d : parent->block_dims()) blocks.push_back(Mat::Zero(d, d));
  return AlgebraElement(std::move(parent), std::move(blocks));
}

AlgebraElement AlgebraElement::identity(AlgebraPtr parent) {
  std::vector<Mat> blocks;
  for (int d : parent->block_dims()) blocks.push_back(Mat::Identity(d, d));
  return AlgebraElement(std::move(parent), std::move(blocks));
}

Vec AlgebraElement::coordinates() const {
  Vec out(parent_->dim());
  int k = 0;
  for (const Mat& m : blocks_)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out[k++] = m(i, j);
  return out;
}

AlgebraElement AlgebraElement::from_coordinates(AlgebraPtr parent, const Vec& coords) {
  if (coords.size() != parent->dim())
    throw StructuralError("coordinate vector has wrong length for '" +
                          parent->label() + "'");
  std::vector<Mat> blocks;
  int k = 0;
  for (int d : parent->block_dims()) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = coords[k++];
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(std::move(parent), std::move(blocks));
}

namespace {
void require_same_parent(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.parent()->same_as(*b.parent()))
    throw StructuralError("elements of '" + a.parent()->label() + "' and '" +
                          b.parent()->label() + "' do not share a parent algebra");
}
}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& rhs) const {
  require_same_parent(*this, rhs);
  std::vector<Mat> blocks;
  for (size_t b = 0; b < blocks_.size(); ++b)
    blocks.push_back(blocks_[b] + rhs.blocks_[b]);
  return AlgebraElement(parent_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& rhs) const {
  require_same_parent(*this, rhs);
  std::vector<Mat> blocks;
  for (size_t b = 0; b < blocks_.size(); ++b)
    blocks.push_back(blocks_[b] - rhs.blocks_[b]);
  return AlgebraElement(parent_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& rhs) const {
  return multiply(*this, rhs);
}

AlgebraElement AlgebraElement::operator*(Cplx scalar) const {
  std::vector<Mat> blocks;
  for (const Mat& m : blocks_) blocks.push_back(scalar * m);
  return AlgebraElement(parent_, std::move(blocks));
}

double AlgebraElement::frobenius_norm() const {
  double s = 0.0;
  for (const Mat& m : blocks_) s += m.squaredNorm();
  return std::sqrt(s);
}

StateSpec::StateSpec(AlgebraPtr parent, std::vector<Mat> densities,
                     const Tolerances& tol)
    : parent_(std::move(parent)), densities_(std::move(densities)) {
  const auto& dims = parent_->block_dims();
  if (densities_.size() != dims.size())
    throw ValidationError("state on '" + parent_->label() +
                          "': wrong number of density blocks");
  double total_trace = 0.0;
  margin_ = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < dims.size(); ++b) {
    const Mat& rho = densities_[b];
    if (rho.rows() != dims[b] || rho.cols() != dims[b])
      throw ValidationError("state on '" + parent_->label() + "': density block " +
                            std::to_string(b) + " has wrong shape");
    if ((rho - rho.adjoint()).norm() > tol.norm)
      throw ValidationError("state on '" + parent_->label() + "': density block " +
                            std::to_string(b) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol.psd) {
      std::ostringstream msg;
      msg << "state on '" << parent_->label() << "': density block " << b
          << " has negative eigenvalue " << min_eig;
      throw ValidationError(msg.str());
    }
    margin_ = std::min(margin_, min_eig);
    total_trace += rho.real().trace();
  }
  if (std::abs(total_trace - 1.0) > tol.norm) {
    std::ostringstream msg;
    msg << "state on '" << parent_->label() << "': total trace " << total_trace
        << " != 1";
    throw ValidationError(msg.str());
  }
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_parent(a, b);
  std::vector<Mat> blocks;
  for (size_t k = 0; k < a.blocks().size(); ++k)
    blocks.push_back(a.blocks()[k] * b.blocks()[k]);
  return AlgebraElement(a.parent(), std::move(blocks));
}

AlgebraElement adjoint(const AlgebraElement& a) {
  std::vector<Mat> blocks;
  for (const Mat& m : a.blocks()) blocks.push_back(m.adjoint());
  return AlgebraElement(a.parent(), std::move(blocks));
}

Cplx state_eval(const StateSpec& phi, const AlgebraElement& a) {
  if (!phi.parent()->same_as(*a.parent()))
    throw StructuralError("state on '" + phi.parent()->label() +
                          "' applied to element of '" + a.parent()->label() + "'");
  Cplx s = 0.0;
  for (size_t b = 0; b < a.blocks().size(); ++b)
    s += (phi.densities()[b] * a.blocks()[b]).trace();
  return s;
}

FaithfulnessResult is_faithful(const StateSpec& phi, const Tolerances& tol) {
  return {phi.faithfulness_margin() > tol.faithful, phi.faithfulness_margin()};
}

AlgebraElement center(const AlgebraElement& a, const StateSpec& phi) {
  Cplx v = state_eval(phi, a);
  return a - AlgebraElement::identity(a.parent()) * v;
}

std::vector<AlgebraElement> standard_basis(AlgebraPtr algebra) {
  std::vector<AlgebraElement> basis;
  const auto& dims = algebra->block_dims();
  for (size_t b = 0; b < dims.size(); ++b) {
    for (int i = 0; i < dims[b]; ++i) {
      for (int j = 0; j < dims[b]; ++j) {
        auto e = AlgebraElement::zero(algebra);
        std::vector<Mat> blocks = e.blocks();
        blocks[b](i, j) = 1.0;
        basis.emplace_back(algebra, std::move(blocks));
      }
    }
  }
  return basis;
}

}  // namespace freeprod
