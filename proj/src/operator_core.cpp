#include "lindred/operator_core.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "lindred/kernels.hpp"

namespace lindred::ops {

Matrix id2() { return Matrix::Identity(2, 2); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Matrix basis_op(Index d, Index i, Index j) {
  if (i < 0 || j < 0 || i >= d || j >= d) throw std::out_of_range("basis_op: index");
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1;
  return m;
}

Matrix embed_site(const Matrix& local, int site, int n_sites) {
  if (local.rows() != 2 || local.cols() != 2)
    throw std::invalid_argument("embed_site: local operator must be 2x2");
  if (n_sites < 1) throw std::invalid_argument("embed_site: bad chain length");
  int s = ((site - 1) % n_sites + n_sites) % n_sites;  // 0-based, periodic wrap
  const Index left = Index(1) << s;
  const Index right = Index(1) << (n_sites - 1 - s);
  Matrix m = kernels::kron(Matrix::Identity(left, left), local);
  return kernels::kron(m, Matrix::Identity(right, right));
}

Vector vectorize(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix devectorize(const Vector& v, Index d) {
  if (v.size() != d * d) throw std::invalid_argument("devectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix apply_superop(const Matrix& superop, const Matrix& x) {
  const Index d = x.rows();
  if (superop.cols() != d * d) throw std::invalid_argument("apply_superop: shape mismatch");
  Vector out = superop * vectorize(x);
  const Index dout = Index(std::llround(std::sqrt(double(superop.rows()))));
  return devectorize(out, dout);
}

Matrix hamiltonian_superop(const Matrix& h) {
  return kernels::liouvillian(h, {});
}

Matrix dissipator(const Matrix& l) {
  return kernels::liouvillian(Matrix::Zero(l.rows(), l.cols()), {l});
}

Matrix liouvillian_matrix(const Matrix& h, const std::vector<Matrix>& jumps) {
  if (h.rows() != h.cols()) throw std::invalid_argument("liouvillian: H not square");
  if (!is_hermitian(h)) throw std::invalid_argument("liouvillian: H not Hermitian");
  for (const Matrix& l : jumps)
    if (l.rows() != h.rows() || l.cols() != h.cols())
      throw std::invalid_argument("liouvillian: jump shape mismatch");
  return kernels::liouvillian(h, jumps);
}

SuperOperator liouvillian(const LindbladModel& model) {
  model.validate();
  return SuperOperator(model.space.dim, model.space.dim,
                       liouvillian_matrix(model.hamiltonian, model.jumps));
}

Matrix heisenberg_adjoint(const Matrix& superop) { return superop.adjoint(); }

Matrix choi_matrix(const Matrix& superop) {
  const Index d = Index(std::llround(std::sqrt(double(superop.rows()))));
  return kernels::choi_reshuffle(superop, d);
}

Matrix choi_matrix_rect(const Matrix& superop, Index d_in, Index d_out) {
  if (superop.rows() != d_out * d_out || superop.cols() != d_in * d_in)
    throw std::invalid_argument("choi_matrix_rect: shape mismatch");
  Matrix c(d_in * d_out, d_in * d_out);
  for (Index j = 0; j < d_in; ++j)
    for (Index i = 0; i < d_in; ++i) {
      // map(E_ij) as a d_out x d_out matrix from column j*d_in + i.
      Eigen::Map<const Matrix> blk(superop.col(j * d_in + i).data(), d_out, d_out);
      for (Index l = 0; l < d_out; ++l)
        for (Index k = 0; k < d_out; ++k) c(i * d_out + k, j * d_out + l) = blk(k, l);
    }
  return c;
}

Matrix choi_output_trace(const Matrix& choi, Index d_in, Index d_out) {
  if (choi.rows() != d_in * d_out) throw std::invalid_argument("choi_output_trace: shape");
  Matrix t = Matrix::Zero(d_in, d_in);
  for (Index i = 0; i < d_in; ++i)
    for (Index j = 0; j < d_in; ++j)
      for (Index k = 0; k < d_out; ++k) t(i, j) += choi(i * d_out + k, j * d_out + k);
  return t;
}

bool is_hermitian(const Matrix& x, double tol) {
  return x.rows() == x.cols() && (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<Matrix> hermitian_basis(Index d) {
  std::vector<Matrix> basis;
  basis.reserve(size_t(d * d));
  basis.push_back(Matrix::Identity(d, d) / std::sqrt(double(d)));
  const double r = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.push_back(sym);
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = Complex(0, -r);
      asym(k, j) = Complex(0, r);
      basis.push_back(asym);
    }
  for (Index l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double f = 1.0 / std::sqrt(double(l * (l + 1)));
    for (Index j = 0; j < l; ++j) diag(j, j) = f;
    diag(l, l) = -double(l) * f;
    basis.push_back(diag);
  }
  return basis;
}

// ---- JSON ingestion ----
namespace {

using nlohmann::json;

Matrix pauli_by_name(const std::string& op) {
  if (op == "x") return pauli_x();
  if (op == "y") return pauli_y();
  if (op == "z") return pauli_z();
  if (op == "+") return sigma_plus();
  if (op == "-") return sigma_minus();
  throw std::invalid_argument("model_from_json: unknown operator '" + op + "'");
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("model_from_json: unknown key '" + it.key() + "' in " + where);
}

Matrix term_matrix(const json& term, int sites, bool hamiltonian, Complex* coeff_out) {
  if (!term.is_object()) throw std::invalid_argument("model_from_json: term must be an object");
  reject_unknown_keys(term, {"coeff", "paulis"}, hamiltonian ? "hamiltonian term" : "jump term");
  if (!term.contains("coeff") || !term.contains("paulis"))
    throw std::invalid_argument("model_from_json: term requires 'coeff' and 'paulis'");
  Complex coeff;
  const json& c = term["coeff"];
  if (c.is_number()) {
    coeff = Complex(c.get<double>(), 0.0);
  } else if (!hamiltonian && c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
    coeff = Complex(c[0].get<double>(), c[1].get<double>());
  } else {
    throw std::invalid_argument(hamiltonian
                                    ? "model_from_json: hamiltonian coeff must be a real number"
                                    : "model_from_json: jump coeff must be real or [re, im]");
  }
  const json& ps = term["paulis"];
  if (!ps.is_array() || ps.empty())
    throw std::invalid_argument("model_from_json: 'paulis' must be a non-empty array");
  const Index dim = Index(1) << sites;
  Matrix m = Matrix::Identity(dim, dim);
  for (const json& p : ps) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_number_integer())
      throw std::invalid_argument("model_from_json: pauli factor must be [op, site]");
    int site = p[1].get<int>();
    if (site < 1 || site > sites)
      throw std::invalid_argument("model_from_json: site index out of range");
    m = m * embed_site(pauli_by_name(p[0].get<std::string>()), site, sites);
  }
  *coeff_out = coeff;
  return m;
}

}  // namespace

LindbladModel model_from_json(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("model_from_json: root must be an object");
  reject_unknown_keys(doc, {"sites", "local_dim", "hamiltonian_terms", "jump_terms", "params"},
                      "model");
  if (!doc.contains("sites") || !doc["sites"].is_number_integer())
    throw std::invalid_argument("model_from_json: integer 'sites' required");
  const int sites = doc["sites"].get<int>();
  if (sites < 1 || sites > 12) throw std::invalid_argument("model_from_json: sites out of range");
  if (!doc.contains("local_dim") || !doc["local_dim"].is_number_integer() ||
      doc["local_dim"].get<int>() != 2)
    throw std::invalid_argument("model_from_json: local_dim must be 2");

  LindbladModel model;
  model.space = HilbertSpace::qubits(sites);
  model.hamiltonian = Matrix::Zero(model.space.dim, model.space.dim);
  model.name = "json";
  if (doc.contains("hamiltonian_terms")) {
    if (!doc["hamiltonian_terms"].is_array())
      throw std::invalid_argument("model_from_json: hamiltonian_terms must be an array");
    for (const json& t : doc["hamiltonian_terms"]) {
      Complex c;
      Matrix m = term_matrix(t, sites, true, &c);
      model.hamiltonian += c.real() * m;
    }
  }
  if (doc.contains("jump_terms")) {
    if (!doc["jump_terms"].is_array())
      throw std::invalid_argument("model_from_json: jump_terms must be an array");
    for (const json& t : doc["jump_terms"]) {
      Complex c;
      Matrix m = term_matrix(t, sites, false, &c);
      model.jumps.push_back(c * m);
    }
  }
  if (doc.contains("params") && !doc["params"].is_object())
    throw std::invalid_argument("model_from_json: params must be an object");
  model.validate();
  return model;
}

LindbladModel model_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("model_from_json_file: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace lindred::ops
