#pragma once

#include <iosfwd>
#include <string>

#include "fairbench/dataset/types.hpp"

namespace fairbench::dataset {

// CSV dialect: comma separated, UTF-8, mandatory header naming the eleven
// record fields in any order, '.' as decimal separator. Empty cells are
// rejected; there is no imputation.
Cohort load_cohort_csv(const std::string& path);
Cohort parse_cohort_csv(std::istream& in, CohortSource source);

// Writes the canonical header and one row per record. Reals use the
// shortest representation that parses back to the same double.
void write_cohort_csv(std::span<const PatientRecord> records, std::ostream& out);
void write_cohort_csv(const Cohort& cohort, const std::string& path);

}  // namespace fairbench::dataset
