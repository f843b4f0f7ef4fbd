#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nlhyp/grid.hpp"

namespace nlhyp {

/// Insertion-ordered JSON report writer. Floating-point values are printed
/// with 17 significant digits so identical runs produce byte-identical
/// reports.
class Report {
public:
    void put(const std::string& key, double v);
    void put(const std::string& key, long v);
    void put(const std::string& key, int v) { put(key, static_cast<long>(v)); }
    void put(const std::string& key, bool v);
    void put(const std::string& key, const std::string& v);
    void put(const std::string& key, const char* v) { put(key, std::string(v)); }
    void put_complex(const std::string& key, cplx v);
    void put_array(const std::string& key, const std::vector<double>& v);
    Report& child(const std::string& key);

    std::string to_json() const;
    void write(const std::string& path) const;

private:
    struct Entry;
    std::vector<Entry> entries_;
    void render(std::string& out, int indent) const;

    struct Entry {
        std::string key;
        std::variant<double, long, bool, std::string, std::vector<double>,
                     std::shared_ptr<Report>>
            value;
    };
};

std::string format_double(double v);

} // namespace nlhyp
