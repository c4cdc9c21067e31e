#include "gplab/errors.hpp"
#include "gplab/lab.hpp"

namespace gplab {

namespace {

RateTable make_table(ArcCosineOrder order, bool bias, double alpha,
                     std::vector<RateTableRow> rows) {
  return RateTable{KernelSpec{order, bias}, alpha, std::move(rows)};
}

std::vector<RateTable> build_tables() {
  using O = ArcCosineOrder;
  const double inf = kInfinity;
  std::vector<RateTable> out;
  out.push_back(make_table(O::one, false, 4.0,
                           {{"f1", "cos2", inf, false, 1.0 / 4, -3.0 / 4},
                            {"f2", "theta_sq", 2.0, true, 1.0, 0.0},
                            {"f3", "abs_shift_sq", 2.0, false, 1.0 / 4, -3.0 / 4},
                            {"f4", "sawtooth", 1.0, false, 3.0 / 4, -1.0 / 4}}));
  out.push_back(make_table(O::one, true, 4.0,
                           {{"f1", "cos2", inf, false, 1.0 / 4, -3.0 / 4},
                            {"f2", "theta_sq", 2.0, false, 1.0 / 4, -3.0 / 4},
                            {"f3", "abs_shift_sq", 2.0, false, 1.0 / 4, -3.0 / 4},
                            {"f4", "sawtooth", 1.0, false, 3.0 / 4, -1.0 / 4}}));
  out.push_back(make_table(O::two, false, 6.0,
                           {{"f1", "cos2", inf, false, 1.0 / 6, -5.0 / 6},
                            {"f2", "sign", 1.0, false, 5.0 / 6, -1.0 / 6},
                            {"f3", "tent", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f4", "sawtooth", 1.0, true, 1.0, 0.0}}));
  out.push_back(make_table(O::two, true, 6.0,
                           {{"f1", "cos2", inf, false, 1.0 / 6, -5.0 / 6},
                            {"f2", "theta_sq", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f3", "abs_shift_sq", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f4", "sawtooth", 1.0, false, 5.0 / 6, -1.0 / 6}}));
  out.push_back(make_table(O::zero, false, 2.0,
                           {{"f1", "cos2", inf, true, 1.0, 0.0},
                            {"f2", "sign", 1.0, false, 1.0 / 2, -1.0 / 2},
                            {"f3", "tent", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f4", "sawtooth", 1.0, true, 1.0, 0.0}}));
  out.push_back(make_table(O::zero, true, 2.0,
                           {{"f1", "cos2", inf, false, 1.0 / 2, -1.0 / 2},
                            {"f2", "theta_sq", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f3", "abs_shift_sq", 2.0, false, 1.0 / 2, -1.0 / 2},
                            {"f4", "sawtooth", 1.0, false, 1.0 / 2, -1.0 / 2}}));
  return out;
}

}  // namespace

const std::vector<RateTable>& rate_tables() {
  static const std::vector<RateTable> tables = build_tables();
  return tables;
}

const RateTable& rate_table(KernelSpec kernel) {
  for (const auto& table : rate_tables()) {
    if (table.kernel == kernel) return table;
  }
  throw DomainError("no rate table for kernel " + kernel.label());
}

const RateTableRow& rate_row(KernelSpec kernel, const std::string& id) {
  for (const auto& row : rate_table(kernel).rows) {
    if (row.id == id) return row;
  }
  throw DomainError("unknown table target '" + id + "' (expected f1..f4)");
}

}  // namespace gplab
