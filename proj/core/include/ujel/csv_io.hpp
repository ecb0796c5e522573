#pragma once

#include "ujel/dataset.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

struct CsvOptions {
    /// Name of the column holding group labels; unset means one file per group.
    std::optional<std::string> group_column;
    /// Group labels in the order the groups should take. Empty means first appearance.
    std::vector<std::string> order;
};

struct IngestResult {
    MultiSampleDataset data;
    std::vector<std::string> group_labels;
    std::vector<std::string> column_names;
    /// Rows read per group.
    std::vector<std::size_t> row_counts;
};

/// Comma-separated records with optional double-quoted fields. Blank lines are skipped.
/// Each record keeps its 1-based line number.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source);

/// Reads one file per group, or a single file split by `options.group_column`.
/// Every non-group column must be numeric.
IngestResult ingest_csv(const std::vector<std::string>& paths, const CsvOptions& options = {});

/// Same, from in-memory texts; `sources` name the texts in error messages.
IngestResult ingest_csv_texts(const std::vector<std::string>& texts,
                              const std::vector<std::string>& sources, const CsvOptions& options = {});

/// Single-file layout with a leading `group` column; values printed with round-trip precision.
void write_dataset_csv(std::ostream& out, const MultiSampleDataset& data,
                       const std::vector<std::string>& group_labels,
                       const std::vector<std::string>& column_names);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_quote(const std::string& field);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace ujel
