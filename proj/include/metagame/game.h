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

#ifndef METAGAME_GAME_H_
#define METAGAME_GAME_H_

#include <array>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metagame {

inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class MetagameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionMismatch : public MetagameError {
 public:
  using MetagameError::MetagameError;
};
class DegenerateGameError : public MetagameError {
 public:
  using MetagameError::MetagameError;
};
class InvalidDeclaration : public MetagameError {
 public:
  using MetagameError::MetagameError;
};
class NonUniqueCceError : public MetagameError {
 public:
  using MetagameError::MetagameError;
};
class InvalidSpec : public MetagameError {
 public:
  using MetagameError::MetagameError;
};

enum class Player { kRow = 0, kColumn = 1 };

inline int Index(Player p) { return static_cast<int>(p); }
inline Player Opponent(Player p) {
  return p == Player::kRow ? Player::kColumn : Player::kRow;
}
std::string PlayerName(Player p);

// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  // Builds from nested rows; all rows must have the same length.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[r * cols_ + c]; }
  double operator()(int r, int c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

  double Min() const;
  double Max() const;
  double Sum() const;
  std::vector<std::vector<double>> ToRows() const;

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// A finite two-player normal-form game. Row player's payoffs are u1, column
// player's payoffs are u2; entry (r, c) is the outcome of row r, column c.
class BimatrixGame {
 public:
  BimatrixGame(Matrix u1, Matrix u2);

  int rows() const { return u1_.rows(); }
  int cols() const { return u1_.cols(); }
  int NumActions(Player p) const {
    return p == Player::kRow ? rows() : cols();
  }
  const Matrix& u1() const { return u1_; }
  const Matrix& u2() const { return u2_; }
  const Matrix& Payoffs(Player p) const {
    return p == Player::kRow ? u1_ : u2_;
  }
  // Payoff to `p` when `p` plays `own` and the opponent plays `opp`.
  double PayoffFor(Player p, int own, int opp) const {
    return p == Player::kRow ? u1_(own, opp) : u2_(opp, own);
  }
  bool Is2x2() const { return rows() == 2 && cols() == 2; }

  bool operator==(const BimatrixGame& other) const = default;

 private:
  Matrix u1_;
  Matrix u2_;
};

// Per-player mixed strategies. For 2x2 games p is the probability of the top
// row and q the probability of the left column.
class MixedProfile {
 public:
  MixedProfile(std::vector<double> row, std::vector<double> col);
  static MixedProfile FromPQ(double p, double q);

  const std::vector<double>& row() const { return row_; }
  const std::vector<double>& col() const { return col_; }
  const std::vector<double>& strategy(Player p) const {
    return p == Player::kRow ? row_ : col_;
  }
  double p() const { return row_.at(0); }
  double q() const { return col_.at(0); }

 private:
  std::vector<double> row_;
  std::vector<double> col_;
};

// Probability mass over joint action profiles.
class JointDistribution {
 public:
  explicit JointDistribution(Matrix probs);
  static JointDistribution PointMass(int rows, int cols, int r, int c);
  static JointDistribution Uniform(int rows, int cols);
  static JointDistribution Product(const MixedProfile& profile);
  // lambda * a + (1 - lambda) * b.
  static JointDistribution Mix(double lambda, const JointDistribution& a,
                               const JointDistribution& b);

  int rows() const { return probs_.rows(); }
  int cols() const { return probs_.cols(); }
  double operator()(int r, int c) const { return probs_(r, c); }
  const Matrix& probs() const { return probs_; }
  std::vector<double> Marginal(Player p) const;

  double L1Distance(const JointDistribution& other) const;
  double TotalVariation(const JointDistribution& other) const {
    return 0.5 * L1Distance(other);
  }

 private:
  Matrix probs_;
};

std::array<double, 2> ExpectedUtilities2x2(const BimatrixGame& game,
                                           const MixedProfile& profile);
std::array<double, 2> JointExpectedUtilities(const BimatrixGame& game,
                                             const JointDistribution& dist);

// Cells of a 2x2 matrix: A top-left, B top-right, C bottom-left,
// D bottom-right.
enum class Cell { kA = 0, kB = 1, kC = 2, kD = 3 };
inline int CellRow(Cell c) { return static_cast<int>(c) / 2; }
inline int CellCol(Cell c) { return static_cast<int>(c) % 2; }
Cell CellFromName(const std::string& name);
std::string CellName(Cell c);

struct Interval {
  double lo = -kInfinity;
  double hi = kInfinity;
  bool Contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

struct FreeCell {
  Cell cell;
  Interval bounds;
};

using Declaration = std::vector<double>;
using DeclarationProfile = std::array<Declaration, 2>;

// A 2x2 game family in which each player declares values for some cells of
// their own payoff matrix; all other cells keep their true values.
class ParamGame2x2 {
 public:
  ParamGame2x2(BimatrixGame base, std::vector<FreeCell> row_cells,
               std::vector<FreeCell> col_cells);

  const BimatrixGame& base() const { return base_; }
  const std::vector<FreeCell>& free_cells(Player p) const {
    return cells_[Index(p)];
  }
  Declaration Truth(Player p) const;
  DeclarationProfile Truth() const { return {Truth(Player::kRow),
                                             Truth(Player::kColumn)}; }

  bool Contains(Player p, const Declaration& decl) const;
  // Throws InvalidDeclaration on a size mismatch or out-of-bounds value.
  void Validate(Player p, const Declaration& decl) const;
  BimatrixGame Instantiate(const DeclarationProfile& decls) const;

 private:
  BimatrixGame base_;
  std::array<std::vector<FreeCell>, 2> cells_;
};

// 2x2 game where both players have strict best-reply reversals in opposite
// directions, so there is no pure equilibrium and a single mixed one.
bool IsFullyMixed2x2(const BimatrixGame& game);

// Both diagonal payoffs of one player exceed both of its off-diagonal
// payoffs, and the reverse holds for the other player.
bool IsOpposingInterests(const BimatrixGame& game);

struct NaturalSpaceResult {
  bool natural = false;
  std::string reason;
};
// Throws InvalidSpec when the base game is not opposing-interests.
NaturalSpaceResult ValidateNaturalSpace(const ParamGame2x2& family);

// Bundled example games.
BimatrixGame MatchingPennies();
BimatrixGame PrisonersDilemma();
BimatrixGame BattleOfTheSexes();
BimatrixGame CoordinationGame();
// Row [[c,-1],[-1,1]], column [[-1,1],[d,-1]]; truth c=2, d=3.
BimatrixGame OpposingInterestsGame(double c = 2.0, double d = 3.0);
// Row [[c,3],[2,4]], column [[d,4],[3,2]]; truth c=1, d=3.
BimatrixGame DominanceSolvableGame(double c = 1.0, double d = 3.0);

// c is the row player's top-left cell, d the column player's bottom-left.
ParamGame2x2 OpposingInterestsFamily(Interval c_bounds = {},
                                     Interval d_bounds = {});
// c is the row player's top-left cell, d the column player's top-left.
ParamGame2x2 DominanceSolvableFamily(Interval c_bounds = {},
                                     Interval d_bounds = {});
// Single-free-cell family on any 2x2 game: row declares cell `row_cell`,
// column declares `col_cell`, both unbounded.
ParamGame2x2 SingleCellFamily(const BimatrixGame& base, Cell row_cell,
                              Cell col_cell);

}  // namespace metagame

#endif  // METAGAME_GAME_H_
