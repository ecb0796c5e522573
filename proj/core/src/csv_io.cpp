#include "ujel/csv_io.hpp"

#include "ujel/config.hpp"
#include "ujel/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace ujel {

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t line,
                  const std::string& column) {
    std::string_view t = cell;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.remove_suffix(1);
    double value = 0.0;
    const char* begin = t.data();
    if (!t.empty() && *begin == '+') ++begin;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw InputError(source + ":" + std::to_string(line) + ": non-numeric cell '" + cell +
                         "' in column '" + column + "'");
    }
    return value;
}

std::vector<std::string> header_of(const std::vector<CsvRecord>& records, const std::string& source) {
    if (records.empty()) throw InputError(source + ": empty file");
    return records.front().fields;
}

void check_width(const CsvRecord& r, std::size_t width, const std::string& source) {
    if (r.fields.size() != width) {
        throw InputError(source + ":" + std::to_string(r.line) + ": ragged row with " +
                         std::to_string(r.fields.size()) + " fields, header has " +
                         std::to_string(width));
    }
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source) {
    std::vector<CsvRecord> out;
    std::size_t line = 1;
    std::size_t i = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    while (i < text.size()) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool quoted = false;
        bool any = false;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
                continue;
            }
            if (c == '"') {
                quoted = true;
                any = true;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                any = true;
            } else if (c == '\n') {
                ++i;
                break;
            } else {
                field.push_back(c);
                any = any || c != '\r';
            }
        }
        if (quoted) throw InputError(source + ":" + std::to_string(rec.line) + ": unterminated quote");
        ++line;
        field = strip_cr(std::move(field));
        if (!any && field.empty()) continue;
        rec.fields.push_back(std::move(field));
        out.push_back(std::move(rec));
    }
    return out;
}

IngestResult ingest_csv_texts(const std::vector<std::string>& texts,
                              const std::vector<std::string>& sources, const CsvOptions& options) {
    if (texts.empty()) throw InputError("no input files");
    if (texts.size() != sources.size()) throw InputError("texts and sources differ in length");

    std::vector<std::string> labels;
    std::vector<std::vector<double>> cells;  // row-major per group
    std::vector<std::size_t> rows;
    std::vector<std::string> columns;

    if (!options.group_column) {
        if (texts.size() < 2) {
            throw InputError("a single input file needs --group-column to split it into groups");
        }
        for (std::size_t f = 0; f < texts.size(); ++f) {
            const auto records = parse_csv(texts[f], sources[f]);
            const auto header = header_of(records, sources[f]);
            if (f == 0) {
                columns = header;
            } else if (header.size() != columns.size()) {
                throw InputError(sources[f] + ": " + std::to_string(header.size()) +
                                 " columns, expected " + std::to_string(columns.size()));
            }
            if (records.size() < 2) throw InputError(sources[f] + ": no data rows");
            std::vector<double> values;
            for (std::size_t r = 1; r < records.size(); ++r) {
                check_width(records[r], header.size(), sources[f]);
                for (std::size_t c = 0; c < header.size(); ++c) {
                    values.push_back(parse_cell(records[r].fields[c], sources[f], records[r].line, header[c]));
                }
            }
            labels.push_back(sources[f]);
            rows.push_back(records.size() - 1);
            cells.push_back(std::move(values));
        }
    } else {
        if (texts.size() != 1) throw InputError("--group-column expects exactly one input file");
        const std::string& source = sources.front();
        const auto records = parse_csv(texts.front(), source);
        const auto header = header_of(records, source);
        const auto git = std::find(header.begin(), header.end(), *options.group_column);
        if (git == header.end()) {
            throw InputError(source + ": no column named '" + *options.group_column + "'");
        }
        const auto gcol = static_cast<std::size_t>(git - header.begin());
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c != gcol) columns.push_back(header[c]);
        }
        if (columns.empty()) throw InputError(source + ": no numeric columns");
        if (records.size() < 2) throw InputError(source + ": no data rows");

        labels = options.order;
        for (std::size_t a = 0; a < labels.size(); ++a) {
            for (std::size_t b = a + 1; b < labels.size(); ++b) {
                if (labels[a] == labels[b]) throw InputError("group '" + labels[a] + "' listed twice in the order");
            }
        }
        const bool fixed = !labels.empty();
        cells.resize(labels.size());
        rows.resize(labels.size());
        for (std::size_t r = 1; r < records.size(); ++r) {
            const auto& rec = records[r];
            check_width(rec, header.size(), source);
            const std::string& label = rec.fields[gcol];
            auto it = std::find(labels.begin(), labels.end(), label);
            if (it == labels.end()) {
                if (fixed) {
                    throw InputError(source + ":" + std::to_string(rec.line) + ": unknown group label '" +
                                     label + "'");
                }
                labels.push_back(label);
                cells.emplace_back();
                rows.push_back(0);
                it = labels.end() - 1;
            }
            const auto g = static_cast<std::size_t>(it - labels.begin());
            for (std::size_t c = 0; c < header.size(); ++c) {
                if (c != gcol) cells[g].push_back(parse_cell(rec.fields[c], source, rec.line, header[c]));
            }
            ++rows[g];
        }
        for (std::size_t g = 0; g < labels.size(); ++g) {
            if (rows[g] == 0) throw InputError(source + ": group '" + labels[g] + "' has no rows");
        }
    }

    std::vector<Matrix> groups;
    for (std::size_t g = 0; g < labels.size(); ++g) {
        groups.emplace_back(rows[g], columns.size(), std::move(cells[g]));
    }
    IngestResult out{validate_dataset(std::move(groups)), labels, columns, rows};
    return out;
}

IngestResult ingest_csv(const std::vector<std::string>& paths, const CsvOptions& options) {
    std::vector<std::string> texts;
    texts.reserve(paths.size());
    for (const auto& p : paths) texts.push_back(read_text_file(p));
    return ingest_csv_texts(texts, paths, options);
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_dataset_csv(std::ostream& out, const MultiSampleDataset& data,
                       const std::vector<std::string>& group_labels,
                       const std::vector<std::string>& column_names) {
    if (group_labels.size() != data.k() || column_names.size() != data.q()) {
        throw InputError("labels do not match the dataset shape");
    }
    out << "group";
    for (const auto& c : column_names) out << ',' << csv_quote(c);
    out << '\n';
    for (std::size_t g = 0; g < data.k(); ++g) {
        const std::string label = csv_quote(group_labels[g]);
        for (std::size_t i = 0; i < data.size(g); ++i) {
            out << label;
            for (std::size_t c = 0; c < data.q(); ++c) out << ',' << format_double(data.group(g)(i, c));
            out << '\n';
        }
    }
}

}  // namespace ujel
