#include "magnomech/table.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace magnomech {

ResultTable::ResultTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
    if (columns_.empty())
        throw std::invalid_argument("a table needs at least one column");
}

void ResultTable::add_meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns_.size())
        throw std::invalid_argument("row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string ResultTable::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void ResultTable::write_csv(std::ostream& os) const {
    for (const auto& [k, v] : meta_) os << "# " << k << " " << v << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << (c ? "," : "") << columns_[c];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << format(row[c]);
        os << "\n";
    }
}

void ResultTable::write_json(std::ostream& os) const {
    nlohmann::json root;
    auto& meta = root["metadata"] = nlohmann::json::object();
    for (const auto& [k, v] : meta_) meta[k] = v;
    root["columns"] = columns_;
    auto& rows = root["rows"] = nlohmann::json::array();
    for (const auto& row : rows_) rows.push_back(row);
    os << root.dump(2) << "\n";
}

void ResultTable::write(std::ostream& os, const std::string& format) const {
    if (format == "csv") write_csv(os);
    else if (format == "json") write_json(os);
    else throw std::invalid_argument("format must be csv or json");
}

}  // namespace magnomech
