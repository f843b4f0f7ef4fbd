#include "nlhyp/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nlhyp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Report::put(const std::string& key, double v) { entries_.push_back({key, v}); }
void Report::put(const std::string& key, long v) { entries_.push_back({key, v}); }
void Report::put(const std::string& key, bool v) { entries_.push_back({key, v}); }
void Report::put(const std::string& key, const std::string& v) { entries_.push_back({key, v}); }

void Report::put_complex(const std::string& key, cplx v) {
    Report& c = child(key);
    c.put("re", v.real());
    c.put("im", v.imag());
}

void Report::put_array(const std::string& key, const std::vector<double>& v) {
    entries_.push_back({key, v});
}

Report& Report::child(const std::string& key) {
    auto sub = std::make_shared<Report>();
    entries_.push_back({key, sub});
    return *sub;
}

namespace {
std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}
} // namespace

void Report::render(std::string& out, int indent) const {
    std::string pad(indent + 2, ' ');
    out += "{\n";
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const Entry& e = entries_[k];
        out += pad + quote(e.key) + ": ";
        if (std::holds_alternative<double>(e.value)) {
            out += format_double(std::get<double>(e.value));
        } else if (std::holds_alternative<long>(e.value)) {
            out += std::to_string(std::get<long>(e.value));
        } else if (std::holds_alternative<bool>(e.value)) {
            out += std::get<bool>(e.value) ? "true" : "false";
        } else if (std::holds_alternative<std::string>(e.value)) {
            out += quote(std::get<std::string>(e.value));
        } else if (std::holds_alternative<std::vector<double>>(e.value)) {
            out += "[";
            const auto& arr = std::get<std::vector<double>>(e.value);
            for (std::size_t i = 0; i < arr.size(); ++i) {
                if (i) out += ", ";
                out += format_double(arr[i]);
            }
            out += "]";
        } else {
            std::get<std::shared_ptr<Report>>(e.value)->render(out, indent + 2);
        }
        if (k + 1 < entries_.size()) out += ",";
        out += "\n";
    }
    out += std::string(indent, ' ') + "}";
}

std::string Report::to_json() const {
    std::string out;
    render(out, 0);
    out += "\n";
    return out;
}

void Report::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << to_json();
}

} // namespace nlhyp
