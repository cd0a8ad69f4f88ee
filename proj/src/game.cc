// Copyright 2026 The Metagame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metagame/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace metagame {

std::string PlayerName(Player p) {
  return p == Player::kRow ? "row" : "column";
}

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix size");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  for (const auto& r : rows) v.emplace_back(r);
  *this = FromRows(v);
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows[0].size());
  Matrix out(m, n);
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw DimensionMismatch("ragged matrix rows");
    }
    for (int c = 0; c < n; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

double Matrix::Min() const {
  return *std::min_element(data_.begin(), data_.end());
}
double Matrix::Max() const {
  return *std::max_element(data_.begin(), data_.end());
}
double Matrix::Sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

std::vector<std::vector<double>> Matrix::ToRows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
  return out;
}

BimatrixGame::BimatrixGame(Matrix u1, Matrix u2)
    : u1_(std::move(u1)), u2_(std::move(u2)) {
  if (u1_.rows() < 1 || u1_.cols() < 1) {
    throw DimensionMismatch("game needs at least one action per player");
  }
  if (u1_.rows() != u2_.rows() || u1_.cols() != u2_.cols()) {
    throw DimensionMismatch("payoff matrices differ in shape");
  }
  for (double x : u1_.data())
    if (!std::isfinite(x)) throw InvalidSpec("non-finite payoff");
  for (double x : u2_.data())
    if (!std::isfinite(x)) throw InvalidSpec("non-finite payoff");
}

namespace {

void CheckSimplex(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InvalidSpec(std::string(what) + ": empty strategy");
  double sum = 0;
  for (double x : v) {
    if (!(x >= -kProbTolerance && x <= 1 + kProbTolerance)) {
      throw InvalidSpec(std::string(what) + ": probability outside [0,1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw InvalidSpec(std::string(what) + ": probabilities do not sum to 1");
  }
}

}  // namespace

MixedProfile::MixedProfile(std::vector<double> row, std::vector<double> col)
    : row_(std::move(row)), col_(std::move(col)) {
  CheckSimplex(row_, "row strategy");
  CheckSimplex(col_, "column strategy");
}

MixedProfile MixedProfile::FromPQ(double p, double q) {
  return MixedProfile({p, 1 - p}, {q, 1 - q});
}

JointDistribution::JointDistribution(Matrix probs) : probs_(std::move(probs)) {
  if (probs_.rows() < 1 || probs_.cols() < 1) {
    throw DimensionMismatch("empty joint distribution");
  }
  for (double x : probs_.data()) {
    if (!(x >= 0.0)) throw InvalidSpec("negative joint probability");
  }
  if (std::abs(probs_.Sum() - 1.0) > kProbTolerance) {
    throw InvalidSpec("joint distribution does not sum to 1");
  }
}

JointDistribution JointDistribution::PointMass(int rows, int cols, int r,
                                               int c) {
  Matrix m(rows, cols);
  m(r, c) = 1.0;
  return JointDistribution(std::move(m));
}

JointDistribution JointDistribution::Uniform(int rows, int cols) {
  return JointDistribution(Matrix(rows, cols, 1.0 / (rows * cols)));
}

JointDistribution JointDistribution::Product(const MixedProfile& profile) {
  const auto& x = profile.row();
  const auto& y = profile.col();
  Matrix m(x.size(), y.size());
  for (size_t r = 0; r < x.size(); ++r)
    for (size_t c = 0; c < y.size(); ++c)
      m(r, c) = std::max(0.0, x[r]) * std::max(0.0, y[c]);
  return JointDistribution(std::move(m));
}

JointDistribution JointDistribution::Mix(double lambda,
                                         const JointDistribution& a,
                                         const JointDistribution& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("mixing distributions of different shape");
  }
  Matrix m(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      m(r, c) = lambda * a(r, c) + (1 - lambda) * b(r, c);
  return JointDistribution(std::move(m));
}

std::vector<double> JointDistribution::Marginal(Player p) const {
  std::vector<double> out(p == Player::kRow ? rows() : cols(), 0.0);
  for (int r = 0; r < rows(); ++r)
    for (int c = 0; c < cols(); ++c)
      out[p == Player::kRow ? r : c] += probs_(r, c);
  return out;
}

double JointDistribution::L1Distance(const JointDistribution& other) const {
  if (rows() != other.rows() || cols() != other.cols()) {
    throw DimensionMismatch("distance between distributions of different "
                            "shape");
  }
  double d = 0;
  for (int r = 0; r < rows(); ++r)
    for (int c = 0; c < cols(); ++c) d += std::abs(probs_(r, c) - other(r, c));
  return d;
}

std::array<double, 2> ExpectedUtilities2x2(const BimatrixGame& game,
                                           const MixedProfile& profile) {
  if (!game.Is2x2() || profile.row().size() != 2 ||
      profile.col().size() != 2) {
    throw DimensionMismatch("2x2 expected utilities need a 2x2 game");
  }
  const double p = profile.p(), q = profile.q();
  std::array<double, 2> out;
  {
    const Matrix& u = game.u1();
    double a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
    out[0] = p * q * (a - c + d - b) + p * (b - d) + q * (c - d) + d;
  }
  {
    const Matrix& u = game.u2();
    double a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
    out[1] = p * q * (a - b + d - c) + p * (b - d) + q * (c - d) + d;
  }
  return out;
}

std::array<double, 2> JointExpectedUtilities(const BimatrixGame& game,
                                             const JointDistribution& dist) {
  if (game.rows() != dist.rows() || game.cols() != dist.cols()) {
    throw DimensionMismatch("distribution does not match game shape");
  }
  std::array<double, 2> out = {0.0, 0.0};
  for (int r = 0; r < game.rows(); ++r) {
    for (int c = 0; c < game.cols(); ++c) {
      out[0] += dist(r, c) * game.u1()(r, c);
      out[1] += dist(r, c) * game.u2()(r, c);
    }
  }
  return out;
}

Cell CellFromName(const std::string& name) {
  if (name == "A") return Cell::kA;
  if (name == "B") return Cell::kB;
  if (name == "C") return Cell::kC;
  if (name == "D") return Cell::kD;
  throw InvalidSpec("unknown cell name '" + name + "'");
}

std::string CellName(Cell c) {
  return std::string(1, "ABCD"[static_cast<int>(c)]);
}

ParamGame2x2::ParamGame2x2(BimatrixGame base, std::vector<FreeCell> row_cells,
                           std::vector<FreeCell> col_cells)
    : base_(std::move(base)),
      cells_{std::move(row_cells), std::move(col_cells)} {
  if (!base_.Is2x2()) throw DimensionMismatch("family base must be 2x2");
  for (int i = 0; i < 2; ++i) {
    std::set<Cell> seen;
    for (const FreeCell& fc : cells_[i]) {
      if (!seen.insert(fc.cell).second) {
        throw InvalidSpec("cell " + CellName(fc.cell) + " declared twice");
      }
      if (!(fc.bounds.lo <= fc.bounds.hi)) {
        throw InvalidSpec("empty declaration interval");
      }
    }
    Player p = static_cast<Player>(i);
    if (!Contains(p, Truth(p))) {
      throw InvalidSpec("true " + PlayerName(p) +
                        " payoffs lie outside the declaration space");
    }
  }
}

Declaration ParamGame2x2::Truth(Player p) const {
  Declaration out;
  const Matrix& u = base_.Payoffs(p);
  for (const FreeCell& fc : cells_[Index(p)]) {
    out.push_back(u(CellRow(fc.cell), CellCol(fc.cell)));
  }
  return out;
}

bool ParamGame2x2::Contains(Player p, const Declaration& decl) const {
  const auto& cells = cells_[Index(p)];
  if (decl.size() != cells.size()) return false;
  for (size_t k = 0; k < cells.size(); ++k) {
    if (!std::isfinite(decl[k]) || !cells[k].bounds.Contains(decl[k])) {
      return false;
    }
  }
  return true;
}

void ParamGame2x2::Validate(Player p, const Declaration& decl) const {
  const auto& cells = cells_[Index(p)];
  if (decl.size() != cells.size()) {
    std::ostringstream os;
    os << PlayerName(p) << " declaration has " << decl.size()
       << " values, family expects " << cells.size();
    throw InvalidDeclaration(os.str());
  }
  for (size_t k = 0; k < cells.size(); ++k) {
    if (!std::isfinite(decl[k]) || !cells[k].bounds.Contains(decl[k])) {
      std::ostringstream os;
      os << PlayerName(p) << " declares " << decl[k] << " for cell "
         << CellName(cells[k].cell) << ", outside [" << cells[k].bounds.lo
         << ", " << cells[k].bounds.hi << "]";
      throw InvalidDeclaration(os.str());
    }
  }
}

BimatrixGame ParamGame2x2::Instantiate(const DeclarationProfile& decls) const {
  Matrix u[2] = {base_.u1(), base_.u2()};
  for (int i = 0; i < 2; ++i) {
    Validate(static_cast<Player>(i), decls[i]);
    for (size_t k = 0; k < cells_[i].size(); ++k) {
      const Cell cell = cells_[i][k].cell;
      u[i](CellRow(cell), CellCol(cell)) = decls[i][k];
    }
  }
  return BimatrixGame(std::move(u[0]), std::move(u[1]));
}

bool IsFullyMixed2x2(const BimatrixGame& game) {
  if (!game.Is2x2()) return false;
  const Matrix& u1 = game.u1();
  const Matrix& u2 = game.u2();
  const double row_left = u1(0, 0) - u1(1, 0);
  const double row_right = u1(0, 1) - u1(1, 1);
  const double col_top = u2(0, 0) - u2(0, 1);
  const double col_bottom = u2(1, 0) - u2(1, 1);
  return row_left * row_right < 0 && col_top * col_bottom < 0 &&
         row_left * col_top < 0;
}

bool IsOpposingInterests(const BimatrixGame& game) {
  if (!game.Is2x2()) return false;
  auto diagonal_above = [](const Matrix& m) {
    return std::min(m(0, 0), m(1, 1)) > std::max(m(0, 1), m(1, 0));
  };
  auto diagonal_below = [](const Matrix& m) {
    return std::max(m(0, 0), m(1, 1)) < std::min(m(0, 1), m(1, 0));
  };
  return (diagonal_above(game.u1()) && diagonal_below(game.u2())) ||
         (diagonal_below(game.u1()) && diagonal_above(game.u2()));
}

namespace {

// Range of a difference x - y where x, y range over the given intervals.
Interval DiffRange(Interval x, Interval y) { return {x.lo - y.hi, x.hi - y.lo}; }

// Interval of values a cell may take: its declaration bounds when free,
// otherwise the true value.
Interval CellRange(const ParamGame2x2& family, Player p, Cell cell) {
  for (const FreeCell& fc : family.free_cells(p)) {
    if (fc.cell == cell) return fc.bounds;
  }
  double v = family.base().Payoffs(p)(CellRow(cell), CellCol(cell));
  return {v, v};
}

// Adds w * [lo, hi] to acc, treating 0 * inf as 0.
void AddScaled(Interval& acc, double w, Interval x) {
  if (w == 0) return;
  double a = w * x.lo, b = w * x.hi;
  acc.lo += std::min(a, b);
  acc.hi += std::max(a, b);
}

NaturalSpaceResult CheckPlayerSpace(const ParamGame2x2& family, Player p) {
  // The declaring player's indifference condition is
  //   s * first + (1 - s) * second = 0
  // where s is the opponent's probability on their first action and
  // first/second are the payoff differences against each opponent action.
  Interval first, second;
  double true_first, true_second;
  const Matrix& u = family.base().Payoffs(p);
  if (p == Player::kRow) {
    first = DiffRange(CellRange(family, p, Cell::kA),
                      CellRange(family, p, Cell::kC));
    second = DiffRange(CellRange(family, p, Cell::kB),
                       CellRange(family, p, Cell::kD));
    true_first = u(0, 0) - u(1, 0);
    true_second = u(0, 1) - u(1, 1);
  } else {
    first = DiffRange(CellRange(family, p, Cell::kA),
                      CellRange(family, p, Cell::kB));
    second = DiffRange(CellRange(family, p, Cell::kC),
                       CellRange(family, p, Cell::kD));
    true_first = u(0, 0) - u(0, 1);
    true_second = u(1, 0) - u(1, 1);
  }
  const std::string who = PlayerName(p);
  constexpr int kGrid = 100;
  for (int k = 1; k < kGrid; ++k) {
    const double s = static_cast<double>(k) / kGrid;
    Interval range{0.0, 0.0};
    AddScaled(range, s, first);
    AddScaled(range, 1 - s, second);
    if (!(range.lo <= 0.0 && range.hi >= 0.0)) {
      std::ostringstream os;
      os << "not sufficiently general: no " << who
         << " declaration makes the " << who
         << " player indifferent when the opponent mixes " << s;
      return {false, os.str()};
    }
  }
  // Both differences flipping at once reverses each best reply without
  // creating a dominant action.
  auto can_have_sign = [](Interval r, double sign) {
    return sign > 0 ? r.hi > 0 : r.lo < 0;
  };
  if (can_have_sign(first, -true_first) && can_have_sign(second, -true_second)) {
    return {false, "not analyzable: a " + who +
                       " declaration reverses both best replies"};
  }
  return {true, ""};
}

}  // namespace

NaturalSpaceResult ValidateNaturalSpace(const ParamGame2x2& family) {
  if (!IsOpposingInterests(family.base())) {
    throw InvalidSpec("natural-space check needs an opposing-interests base "
                      "game");
  }
  for (Player p : {Player::kRow, Player::kColumn}) {
    NaturalSpaceResult r = CheckPlayerSpace(family, p);
    if (!r.natural) return r;
  }
  return {true, "natural"};
}

BimatrixGame MatchingPennies() {
  return BimatrixGame({{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}});
}

BimatrixGame PrisonersDilemma() {
  return BimatrixGame({{3, 0}, {4, 1}}, {{3, 4}, {0, 1}});
}

BimatrixGame BattleOfTheSexes() {
  return BimatrixGame({{2, 0}, {0, 1}}, {{1, 0}, {0, 2}});
}

BimatrixGame CoordinationGame() {
  return BimatrixGame({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
}

BimatrixGame OpposingInterestsGame(double c, double d) {
  return BimatrixGame({{c, -1}, {-1, 1}}, {{-1, 1}, {d, -1}});
}

BimatrixGame DominanceSolvableGame(double c, double d) {
  return BimatrixGame({{c, 3}, {2, 4}}, {{d, 4}, {3, 2}});
}

ParamGame2x2 OpposingInterestsFamily(Interval c_bounds, Interval d_bounds) {
  return ParamGame2x2(OpposingInterestsGame(), {{Cell::kA, c_bounds}},
                      {{Cell::kC, d_bounds}});
}

ParamGame2x2 DominanceSolvableFamily(Interval c_bounds, Interval d_bounds) {
  return ParamGame2x2(DominanceSolvableGame(), {{Cell::kA, c_bounds}},
                      {{Cell::kA, d_bounds}});
}

ParamGame2x2 SingleCellFamily(const BimatrixGame& base, Cell row_cell,
                              Cell col_cell) {
  return ParamGame2x2(base, {{row_cell, {}}}, {{col_cell, {}}});
}

}  // namespace metagame
