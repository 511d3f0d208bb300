#include "nbsim/cell_selection.hpp"

#include <cmath>

#include "nbsim/errors.hpp"

namespace nbsim {
namespace {

// Index of the best score; `better(a, b)` is a strict ordering. Ties resolve
// to the lowest cell id regardless of input order.
template <typename Score, typename Better>
std::size_t best_index(std::span<const CellMeasure> measures, Score score, Better better) {
  if (measures.empty()) throw InputError("no cells to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < measures.size(); ++i) {
    const double s = score(measures[i]);
    const double b = score(measures[best]);
    if (better(s, b) || (s == b && measures[i].cell_id < measures[best].cell_id)) best = i;
  }
  return best;
}

int argmax_rsrp(std::span<const CellMeasure> m) {
  return m[best_index(m, [](const CellMeasure& c) { return c.link.rsrp_dbm; }, std::greater<>{})].cell_id;
}

int argmin_path_loss(std::span<const CellMeasure> m) {
  return m[best_index(m, [](const CellMeasure& c) { return c.link.path_loss_db; }, std::less<>{})].cell_id;
}

}  // namespace

std::string_view to_string(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::RsrpOnly: return "rsrp-only";
    case SelectionKind::PathLossBased: return "path-loss";
    case SelectionKind::Hybrid: return "hybrid";
    case SelectionKind::ClassThresholds: return "class-thresholds";
    case SelectionKind::Decoupled: return "decoupled";
  }
  return "?";
}

std::vector<CellMeasure> measure_links(Position ue, std::span<const Cell> cells, double ue_antenna_gain_dbi,
                                       std::span<const double> shadowing_db) {
  if (cells.empty()) throw InputError("measure_links needs at least one cell");
  if (!shadowing_db.empty() && shadowing_db.size() != cells.size()) {
    throw InputError("shadowing vector does not match the cell list");
  }
  std::vector<CellMeasure> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    double pl = path_loss_db(cell.propagation, cell.position, ue);
    if (!shadowing_db.empty()) pl += shadowing_db[i];
    out.push_back({cell.id, cell.cls.kind(), link_from_path_loss(cell, pl, ue_antenna_gain_dbi)});
  }
  return out;
}

double path_loss_from_rsrp_db(const Cell& cell, double rsrp_dbm) {
  return cell.nrs_power_dbm + cell.antenna_gain_dbi - rsrp_dbm;
}

int select_cell(std::span<const CellMeasure> measures, const SelectionPolicy& policy) {
  if (measures.empty()) throw InputError("no cells to select from");
  switch (policy.kind) {
    case SelectionKind::RsrpOnly:
    case SelectionKind::Decoupled: return argmax_rsrp(measures);
    case SelectionKind::PathLossBased: return argmin_path_loss(measures);
    case SelectionKind::Hybrid: {
      double best_rsrp = measures.front().link.rsrp_dbm;
      for (const auto& m : measures) best_rsrp = std::max(best_rsrp, m.link.rsrp_dbm);
      return best_rsrp >= policy.normal_coverage_rsrp_threshold_dbm ? argmin_path_loss(measures)
                                                                    : argmax_rsrp(measures);
    }
    case SelectionKind::ClassThresholds: {
      const auto i = best_index(
          measures, [&](const CellMeasure& c) { return c.link.rsrp_dbm + policy.offset_for(c.cls); },
          std::greater<>{});
      return measures[i].cell_id;
    }
  }
  throw InputError("unknown selection policy");
}

Association decoupled_association(std::span<const CellMeasure> measures) {
  if (measures.empty()) throw InputError("no cells to associate with");
  return {argmax_rsrp(measures), argmin_path_loss(measures)};
}

void validate(const CoverageThresholds& t) {
  for (std::size_t i = 0; i < t.max_coupling_loss_db.size(); ++i) {
    if (!std::isfinite(t.max_coupling_loss_db[i])) throw InputError("coverage thresholds must be finite");
    if (i > 0 && !(t.max_coupling_loss_db[i] > t.max_coupling_loss_db[i - 1])) {
      throw InputError("coverage thresholds must be strictly increasing");
    }
    if (t.repetitions[i] < 1) throw InputError("repetitions must be positive");
    if (i > 0 && t.repetitions[i] < t.repetitions[i - 1]) {
      throw InputError("repetitions must be nondecreasing with CE level");
    }
  }
}

CoverageLevel assign_coverage_level(double coupling_loss_db, const CoverageThresholds& t) {
  constexpr std::array<CeLevel, 3> kLevels{CeLevel::CE0, CeLevel::CE1, CeLevel::CE2};
  for (std::size_t i = 0; i < kLevels.size(); ++i) {
    if (coupling_loss_db <= t.max_coupling_loss_db[i]) return {kLevels[i], t.repetitions[i]};
  }
  return {CeLevel::OutOfCoverage, 0};
}

CoverageLevel next_coverage_level(CeLevel level, const CoverageThresholds& t) {
  switch (level) {
    case CeLevel::CE0: return {CeLevel::CE1, t.repetitions[1]};
    case CeLevel::CE1:
    case CeLevel::CE2: return {CeLevel::CE2, t.repetitions[2]};
    case CeLevel::OutOfCoverage: break;
  }
  return {CeLevel::OutOfCoverage, 0};
}

}  // namespace nbsim
