#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace magnomech {

/// Rectangular numeric result with '#'-prefixed metadata. Floats are
/// rendered with 12 significant digits and a fixed row order, so identical
/// runs produce byte-identical files whatever the worker count.
class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns);

    void add_meta(const std::string& key, const std::string& value);
    void add_row(std::vector<double> row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& meta() const {
        return meta_;
    }

    /// One formatted value, "%.12g".
    static std::string format(double v);

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    void write(std::ostream& os, const std::string& format) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace magnomech
