#include "dhdist/generators.hpp"

#include "dhdist/linalg.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace dhdist {

void RLCTopology::validate(const Tolerance& tol) const {
  const Index nn = nodes();
  auto check_block = [&](const Matrix& g, const Matrix& vals,
                         const char* gname, const char* vname) {
    if (g.rows() != nn)
      throw ValidationError(std::string(gname) +
                            ": incidence blocks must share the node count");
    if (vals.rows() != g.cols() || vals.cols() != g.cols())
      throw ValidationError(std::string(vname) +
                            ": element matrix size must match the incidence "
                            "column count");
    if (vals.size() > 0) {
      Matrix sym = symmetric_part_checked(vals, tol, vname);
      const SymEig eig = sym_eig(sym, tol);
      if (eig.values(0) <= tol.psd_rel * norm_scale(sym))
        throw ValidationError(std::string(vname) +
                              ": element matrix must be positive definite");
    }
  };
  check_block(Gc, C, "Gc", "C");
  check_block(Gl, L, "Gl", "L");
  check_block(Gr, Rr, "Gr", "Rr");
  if (Gv.rows() != nn)
    throw ValidationError("Gv: incidence blocks must share the node count");
  for (const Matrix* g : {&Gc, &Gl, &Gr, &Gv}) require_finite(*g, "incidence");
}

DHPencil rlc_assemble(const RLCTopology& t, const Tolerance& tol) {
  t.validate(tol);
  const Index nn = t.nodes();
  const Index nl = t.Gl.cols();
  const Index nv = t.Gv.cols();
  const Index n = nn + nl + nv;

  Matrix e = Matrix::Zero(n, n);
  if (t.Gc.cols() > 0)
    e.topLeftCorner(nn, nn) = t.Gc * t.C * t.Gc.transpose();
  e.block(nn, nn, nl, nl) = t.L;

  Matrix j = Matrix::Zero(n, n);
  j.block(0, nn, nn, nl) = -t.Gl;
  j.block(0, nn + nl, nn, nv) = -t.Gv;
  j.block(nn, 0, nl, nn) = t.Gl.transpose();
  j.block(nn + nl, 0, nv, nn) = t.Gv.transpose();

  Matrix r = Matrix::Zero(n, n);
  if (t.Gr.cols() > 0)
    r.topLeftCorner(nn, nn) =
        t.Gr * t.Rr.partialPivLu().solve(t.Gr.transpose());

  return DHPencil(0.5 * (e + e.transpose()), j, 0.5 * (r + r.transpose()),
                  tol);
}

RLCRegularity rlc_regularity(const RLCTopology& t, const Tolerance& tol) {
  t.validate(tol);
  RLCRegularity result;
  const Index nn = t.nodes();
  Matrix g1(nn, t.Gc.cols() + t.Gr.cols() + t.Gl.cols() + t.Gv.cols());
  g1 << t.Gc, t.Gr, t.Gl, t.Gv;

  if (t.Gv.cols() == 0) {
    result.gv_full_column_rank = true;  // vacuous
    result.gv_rank.what = "rank Gv (empty)";
  } else {
    result.gv_rank = rank_decision(t.Gv, tol, "rank Gv");
    result.gv_full_column_rank = result.gv_rank.rank == t.Gv.cols();
  }
  if (g1.cols() == 0) {
    result.g1_full_row_rank = nn == 0;
    result.g1_rank.what = "rank G1 (empty)";
  } else {
    result.g1_rank = rank_decision(g1, tol, "rank G1");
    result.g1_full_row_rank = result.g1_rank.rank == nn;
  }
  result.regular = result.gv_full_column_rank && result.g1_full_row_rank;
  return result;
}

std::pair<double, double> rlc_block_lambda_mins(const RLCTopology& t,
                                                const Tolerance& tol) {
  t.validate(tol);
  const Index nn = t.nodes();
  const Index nl = t.Gl.cols();
  const Index nv = t.Gv.cols();

  Matrix ecap = Matrix::Zero(nn, nn);
  if (t.Gc.cols() > 0) ecap = t.Gc * t.C * t.Gc.transpose();
  Matrix rres = Matrix::Zero(nn, nn);
  if (t.Gr.cols() > 0)
    rres = t.Gr * t.Rr.partialPivLu().solve(t.Gr.transpose());
  Matrix first = ecap * ecap + rres * rres +
                 t.Gl * t.Gl.transpose() + t.Gv * t.Gv.transpose();

  Matrix second = Matrix::Zero(nl + nv, nl + nv);
  second.topLeftCorner(nl, nl) = t.L * t.L + t.Gl.transpose() * t.Gl;
  second.topRightCorner(nl, nv) = t.Gl.transpose() * t.Gv;
  second.bottomLeftCorner(nv, nl) = t.Gv.transpose() * t.Gl;
  second.bottomRightCorner(nv, nv) = t.Gv.transpose() * t.Gv;

  const double l1 =
      nn > 0 ? sym_eig(first, tol).values(0) : 0.0;
  const double l2 =
      (nl + nv) > 0 ? sym_eig(second, tol).values(0) : 0.0;
  return {l1, l2};
}

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::tuple: return "tuple";
    case ProblemKind::pencil: return "pencil";
    case ProblemKind::polynomial: return "polynomial";
    case ProblemKind::quadratic: return "quadratic";
    case ProblemKind::general_q: return "general_q";
    case ProblemKind::rlc: return "rlc";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "tuple") return ProblemKind::tuple;
  if (s == "pencil") return ProblemKind::pencil;
  if (s == "polynomial") return ProblemKind::polynomial;
  if (s == "quadratic") return ProblemKind::quadratic;
  if (s == "general_q") return ProblemKind::general_q;
  if (s == "rlc") return ProblemKind::rlc;
  throw ValidationError("unknown problem kind: " + s);
}

const Matrix& ProblemFile::matrix(const std::string& name) const {
  auto it = matrices.find(name);
  if (it == matrices.end())
    throw ValidationError("problem file: missing matrix '" + name + "'");
  return it->second;
}

StructuredTuple ProblemFile::to_tuple() const {
  std::vector<Matrix> xs;
  for (int i = 0;; ++i) {
    auto it = matrices.find("X" + std::to_string(i));
    if (it == matrices.end()) break;
    xs.push_back(it->second);
  }
  if (xs.empty())
    throw ValidationError("tuple problem: expected matrices X0, X1, ...");
  return StructuredTuple(matrix("J"), xs, tolerances);
}

DHPencil ProblemFile::to_pencil() const {
  return DHPencil(matrix("E"), matrix("J"), matrix("R"), tolerances);
}

StructuredPolynomial ProblemFile::to_polynomial() const {
  if (grade < 0)
    throw ValidationError("polynomial problem: grade is mandatory");
  if (skew_index < 0)
    throw ValidationError("polynomial problem: skew_index is mandatory");
  std::vector<Matrix> as;
  for (int i = 0; i <= grade; ++i) as.push_back(matrix("A" + std::to_string(i)));
  return StructuredPolynomial(grade, skew_index, matrix("J"), as, tolerances);
}

DHQuadratic ProblemFile::to_quadratic() const {
  return DHQuadratic(matrix("M"), matrix("G"), matrix("D"), matrix("K"),
                     tolerances);
}

GeneralDHSystem ProblemFile::to_general() const {
  return GeneralDHSystem(matrix("E"), matrix("Q"), matrix("J"), matrix("R"),
                         tolerances);
}

RLCTopology ProblemFile::to_rlc() const {
  RLCTopology t{matrix("Gc"), matrix("Gl"), matrix("Gr"), matrix("Gv"),
                matrix("C"),  matrix("L"),  matrix("Rr")};
  t.validate(tolerances);
  return t;
}

ProblemFile ProblemFile::from_tuple(const StructuredTuple& t) {
  ProblemFile f;
  f.kind = ProblemKind::tuple;
  f.matrices["J"] = t.J();
  for (std::size_t i = 0; i < t.num_x(); ++i)
    f.matrices["X" + std::to_string(i)] = t.X(i);
  return f;
}

ProblemFile ProblemFile::from_pencil(const DHPencil& p) {
  ProblemFile f;
  f.kind = ProblemKind::pencil;
  f.matrices["E"] = p.E();
  f.matrices["J"] = p.J();
  f.matrices["R"] = p.R();
  return f;
}

ProblemFile ProblemFile::from_polynomial(const StructuredPolynomial& p) {
  ProblemFile f;
  f.kind = ProblemKind::polynomial;
  f.grade = p.grade();
  f.skew_index = p.skew_index();
  f.matrices["J"] = p.J();
  for (int i = 0; i <= p.grade(); ++i)
    f.matrices["A" + std::to_string(i)] = p.A(i);
  return f;
}

ProblemFile ProblemFile::from_quadratic(const DHQuadratic& q) {
  ProblemFile f;
  f.kind = ProblemKind::quadratic;
  f.matrices["M"] = q.M();
  f.matrices["G"] = q.G();
  f.matrices["D"] = q.D();
  f.matrices["K"] = q.K();
  return f;
}

ProblemFile ProblemFile::from_general(const GeneralDHSystem& s) {
  ProblemFile f;
  f.kind = ProblemKind::general_q;
  f.matrices["E"] = s.E();
  f.matrices["Q"] = s.Q();
  f.matrices["J"] = s.J();
  f.matrices["R"] = s.R();
  return f;
}

ProblemFile ProblemFile::from_rlc(const RLCTopology& t) {
  ProblemFile f;
  f.kind = ProblemKind::rlc;
  f.matrices["Gc"] = t.Gc;
  f.matrices["Gl"] = t.Gl;
  f.matrices["Gr"] = t.Gr;
  f.matrices["Gv"] = t.Gv;
  f.matrices["C"] = t.C;
  f.matrices["L"] = t.L;
  f.matrices["Rr"] = t.Rr;
  return f;
}

ProblemFile fixture(const std::string& name, double eps) {
  if (name == "numeric1") {
    Matrix e(2, 2), j(2, 2), r(2, 2);
    e << 0, 0, 0, 1;
    j << 0, -0.5, 0.5, 0;
    r << 0.18, 0.42, 0.42, 1.03;
    return ProblemFile::from_pencil(DHPencil(e, j, r));
  }
  if (name == "ex42") {
    return ProblemFile::from_pencil(DHPencil(
        Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Identity(2, 2)));
  }
  if (name == "ex51-eps") {
    if (eps <= 0) throw ValidationError("ex51-eps: eps must be positive");
    const double alpha = 5.0 / eps + 1.0;
    Matrix e = Matrix::Zero(5, 5);
    e(0, 0) = e(1, 1) = e(2, 2) = 1.0;
    Matrix j(5, 5);
    j << 0, 0, 0, 0, -1,
         0, 0, 0, 1, 1,
         0, 0, 0, -1, -1,
         0, -1, 1, 0, eps,
         1, -1, 1, -eps, 0;
    Matrix r(5, 5);
    r << alpha, 0, 0, 0, 1,
         0, alpha, 0, 1, 1,
         0, 0, alpha, 1, 1,
         0, 1, 1, eps, 0,
         1, 1, 1, 0, eps;
    return ProblemFile::from_pencil(DHPencil(e, j, r));
  }
  if (name == "rem49-eps") {
    if (eps <= 0) throw ValidationError("rem49-eps: eps must be positive");
    Matrix a1 = Matrix::Zero(2, 2), a0 = Matrix::Zero(2, 2);
    a1(0, 0) = eps;
    a0(1, 1) = 1.0;
    return ProblemFile::from_polynomial(
        StructuredPolynomial(1, 0, Matrix::Zero(2, 2), {a0, a1}));
  }
  if (name == "cubic1") {
    Matrix one = Matrix::Identity(1, 1);
    Matrix zero = Matrix::Zero(1, 1);
    return ProblemFile::from_polynomial(
        StructuredPolynomial(3, 0, zero, {one, zero, zero, one}));
  }
  throw ValidationError("unknown fixture: " + name);
}

Matrix random_psd(Rng& rng, Index n, int rank) {
  Matrix f = rng.gaussian_matrix(n, n);
  Matrix s = f.transpose() * f / static_cast<double>(n);
  s = 0.5 * (s + s.transpose());
  if (rank >= 0 && rank < n) {
    const SymEig eig = sym_eig(s);
    Vector values = eig.values;
    for (Index i = 0; i < n - rank; ++i) values(i) = 0.0;
    s = eig.vectors * values.asDiagonal() * eig.vectors.transpose();
    s = 0.5 * (s + s.transpose());
  }
  return s;
}

Matrix random_skew(Rng& rng, Index n) {
  Matrix b = rng.gaussian_matrix(n, n);
  return 0.5 * (b - b.transpose());
}

Matrix random_orthogonal(Rng& rng, Index n) {
  Matrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // fix the sign convention so the distribution is Haar
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

StructuredTuple random_tuple(Rng& rng, Index n, int num_x,
                             int common_kernel_dim) {
  const Index r = std::min<Index>(common_kernel_dim, n);
  const Index m = n - r;
  Matrix j = Matrix::Zero(n, n);
  std::vector<Matrix> xs;
  if (m > 0) j.topLeftCorner(m, m) = random_skew(rng, m);
  for (int i = 0; i < num_x; ++i) {
    Matrix x = Matrix::Zero(n, n);
    if (m > 0) x.topLeftCorner(m, m) = random_psd(rng, m);
    xs.push_back(x);
  }
  if (r > 0) {
    const Matrix q = random_orthogonal(rng, n);
    j = (q.transpose() * j * q).eval();
    for (Matrix& x : xs) {
      x = (q.transpose() * x * q).eval();
      x = 0.5 * (x + x.transpose());
    }
    j = 0.5 * (j - j.transpose());
  }
  return StructuredTuple(j, xs);
}

DHPencil random_pencil(Rng& rng, Index n, bool rank_deficient_e,
                       bool shared_er_kernel) {
  if (shared_er_kernel) {
    // E and R share a kernel direction while J couples it to the rest
    Matrix e = Matrix::Zero(n, n), r = Matrix::Zero(n, n);
    e.topLeftCorner(n - 1, n - 1) = random_psd(rng, n - 1);
    r.topLeftCorner(n - 1, n - 1) = random_psd(rng, n - 1);
    Matrix j = random_skew(rng, n);
    const Matrix q = random_orthogonal(rng, n);
    e = (q.transpose() * e * q).eval();
    r = (q.transpose() * r * q).eval();
    j = (q.transpose() * j * q).eval();
    return DHPencil(0.5 * (e + e.transpose()), 0.5 * (j - j.transpose()),
                    0.5 * (r + r.transpose()));
  }
  const int rank_e = rank_deficient_e ? static_cast<int>(n) - 1 : -1;
  return DHPencil(random_psd(rng, n, rank_e), random_skew(rng, n),
                  random_psd(rng, n));
}

DHQuadratic random_quadratic(Rng& rng, Index n, int rank_k) {
  return DHQuadratic(random_psd(rng, n), random_skew(rng, n),
                     random_psd(rng, n), random_psd(rng, n, rank_k));
}

GeneralDHSystem random_general(Rng& rng, Index n) {
  // E = Q^{-T} S with S PSD makes E^T Q = S exactly symmetric PSD
  Matrix q = Matrix::Identity(n, n) + 0.4 * rng.gaussian_matrix(n, n);
  while (min_singular_value(q) < 0.2)
    q = Matrix::Identity(n, n) + 0.4 * rng.gaussian_matrix(n, n);
  const Matrix s = random_psd(rng, n) + 0.1 * Matrix::Identity(n, n);
  const Matrix e = q.transpose().partialPivLu().solve(s);
  return GeneralDHSystem(e, q, random_skew(rng, n), random_psd(rng, n));
}

RLCTopology random_rlc(Rng& rng, Index nodes, Index nc, Index nl, Index nr,
                       Index nv, bool degenerate) {
  auto incidence = [&](Index cols) {
    Matrix g = Matrix::Zero(nodes, cols);
    for (Index c = 0; c < cols; ++c) {
      const int a = rng.integer(0, static_cast<int>(nodes) - 1);
      int b = rng.integer(0, static_cast<int>(nodes) - 1);
      g(a, c) += 1.0;
      if (b != a) g(b, c) -= 1.0;  // b == a models an element to ground
    }
    return g;
  };
  RLCTopology t;
  t.Gc = incidence(nc);
  t.Gl = incidence(nl);
  t.Gr = incidence(nr);
  t.Gv = incidence(nv);
  if (degenerate && nv >= 2) t.Gv.col(nv - 1) = t.Gv.col(0);
  if (degenerate && nv < 2 && nodes >= 2) {
    // cut one node off from every element group
    t.Gc.row(nodes - 1).setZero();
    t.Gl.row(nodes - 1).setZero();
    t.Gr.row(nodes - 1).setZero();
    t.Gv.row(nodes - 1).setZero();
  }
  auto pd = [&](Index m) {
    Matrix v = random_psd(rng, m);
    return (v + Matrix::Identity(m, m) * (0.5 + rng.uniform())).eval();
  };
  t.C = pd(nc);
  t.L = pd(nl);
  t.Rr = pd(nr);
  return t;
}

ProblemFile random_instance(Index n, ProblemKind kind, std::uint64_t seed,
                            int rank_deficiency) {
  Rng rng(seed);
  switch (kind) {
    case ProblemKind::tuple:
      return ProblemFile::from_tuple(random_tuple(rng, n, 2, rank_deficiency));
    case ProblemKind::pencil: {
      if (rank_deficiency > 0) {
        StructuredTuple t = random_tuple(rng, n, 2, rank_deficiency);
        return ProblemFile::from_pencil(DHPencil(t.X(0), t.J(), t.X(1)));
      }
      return ProblemFile::from_pencil(random_pencil(rng, n));
    }
    case ProblemKind::polynomial: {
      std::vector<Matrix> as;
      for (int i = 0; i <= 2; ++i) as.push_back(random_psd(rng, n));
      return ProblemFile::from_polynomial(
          StructuredPolynomial(2, 1, random_skew(rng, n), as));
    }
    case ProblemKind::quadratic:
      return ProblemFile::from_quadratic(random_quadratic(
          rng, n, rank_deficiency > 0 ? static_cast<int>(n) - rank_deficiency
                                      : -1));
    case ProblemKind::general_q:
      return ProblemFile::from_general(random_general(rng, n));
    case ProblemKind::rlc:
      return ProblemFile::from_rlc(
          random_rlc(rng, n, n, std::max<Index>(1, n / 2),
                     std::max<Index>(1, n / 2), std::max<Index>(1, n / 3),
                     rank_deficiency > 0));
  }
  throw ValidationError("random_instance: unsupported kind");
}

}  // namespace dhdist
