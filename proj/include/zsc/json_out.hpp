#pragma once

// Minimal JSON emitter with insertion-ordered objects and doubles printed
// at 17 significant digits, so reports round-trip exactly and repeated
// runs are byte-identical.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace zsc::jout {

class Value;
using Array = std::vector<Value>;
using Member = std::pair<std::string, Value>;
using Object = std::vector<Member>;

class Value {
public:
    Value() : v_(nullptr) {}
    Value(std::nullptr_t) : v_(nullptr) {}
    Value(bool b) : v_(b) {}
    Value(double d) : v_(d) {}
    Value(int i) : v_(static_cast<std::int64_t>(i)) {}
    Value(std::int64_t i) : v_(i) {}
    Value(std::uint64_t i) : v_(static_cast<std::int64_t>(i)) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(Array a) : v_(std::move(a)) {}
    Value(Object o) : v_(std::move(o)) {}
    Value(const std::optional<double>& d) : v_(nullptr) {
        if (d) v_ = *d;
    }

    static Value object() { return Value(Object{}); }
    static Value array() { return Value(Array{}); }

    Value& set(std::string key, Value val) {
        std::get<Object>(v_).emplace_back(std::move(key), std::move(val));
        return *this;
    }
    Value& push(Value val) {
        std::get<Array>(v_).push_back(std::move(val));
        return *this;
    }

    template <class It>
    static Value numbers(It begin, It end) {
        Value a = array();
        for (It it = begin; it != end; ++it) a.push(static_cast<double>(*it));
        return a;
    }

    void dump(std::ostream& os, int indent = 0) const { write(os, indent, 0); }

private:
    static void escape(std::ostream& os, const std::string& s) {
        os << '"';
        for (char c : s) {
            switch (c) {
                case '"': os << "\\\""; break;
                case '\\': os << "\\\\"; break;
                case '\n': os << "\\n"; break;
                case '\t': os << "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        os << buf;
                    } else {
                        os << c;
                    }
            }
        }
        os << '"';
    }

    static void number(std::ostream& os, double d) {
        if (d != d || d == std::numeric_limits<double>::infinity() ||
            d == -std::numeric_limits<double>::infinity()) {
            os << "null";  // JSON has no non-finite numbers
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        os << buf;
    }

    void write(std::ostream& os, int indent, int depth) const {
        const std::string pad(indent * depth, ' ');
        const std::string pad1(indent * (depth + 1), ' ');
        const char* nl = indent ? "\n" : "";
        if (std::holds_alternative<std::nullptr_t>(v_)) {
            os << "null";
        } else if (const auto* b = std::get_if<bool>(&v_)) {
            os << (*b ? "true" : "false");
        } else if (const auto* d = std::get_if<double>(&v_)) {
            number(os, *d);
        } else if (const auto* i = std::get_if<std::int64_t>(&v_)) {
            os << *i;
        } else if (const auto* s = std::get_if<std::string>(&v_)) {
            escape(os, *s);
        } else if (const auto* a = std::get_if<Array>(&v_)) {
            if (a->empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            for (std::size_t k = 0; k < a->size(); ++k) {
                if (indent) os << pad1;
                (*a)[k].write(os, indent, depth + 1);
                if (k + 1 < a->size()) os << ',';
                os << nl;
            }
            if (indent) os << pad;
            os << ']';
        } else {
            const auto& o = std::get<Object>(v_);
            if (o.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            for (std::size_t k = 0; k < o.size(); ++k) {
                if (indent) os << pad1;
                escape(os, o[k].first);
                os << (indent ? ": " : ":");
                o[k].second.write(os, indent, depth + 1);
                if (k + 1 < o.size()) os << ',';
                os << nl;
            }
            if (indent) os << pad;
            os << '}';
        }
    }

    std::variant<std::nullptr_t, bool, double, std::int64_t, std::string, Array, Object> v_;
};

}  // namespace zsc::jout
