#ifndef LINGRAPH_SYMBOLS_HPP
#define LINGRAPH_SYMBOLS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lingraph {

// Interned identifier. Separate id spaces are kept per SymbolTable, so a
// vertex name and a vertex label may share the numeric value without clashing.
using Sym = int32_t;
constexpr Sym kNoSym = -1;

class SymbolTable {
public:
    Sym intern(const std::string& s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        Sym id = static_cast<Sym>(names_.size());
        names_.push_back(s);
        index_.emplace(s, id);
        return id;
    }
    Sym find(const std::string& s) const {
        auto it = index_.find(s);
        return it == index_.end() ? kNoSym : it->second;
    }
    const std::string& name(Sym id) const { return names_.at(static_cast<size_t>(id)); }
    size_t size() const { return names_.size(); }
    bool contains(Sym id) const { return id >= 0 && static_cast<size_t>(id) < names_.size(); }

    // Generates a name not present yet, based on the given stem.
    Sym fresh(const std::string& stem) {
        if (index_.find(stem) == index_.end()) return intern(stem);
        for (int i = 1;; ++i) {
            std::string cand = stem + "_" + std::to_string(i);
            if (index_.find(cand) == index_.end()) return intern(cand);
        }
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Sym> index_;
};

// A word over an interned alphabet; one symbol per derivation step.
using Word = std::vector<Sym>;

inline bool is_prefix(const Word& p, const Word& w) {
    if (p.size() > w.size()) return false;
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != w[i]) return false;
    return true;
}

inline Word prefix_of(const Word& w, size_t len) {
    return Word(w.begin(), w.begin() + static_cast<long>(len));
}

struct WordHash {
    size_t operator()(const Word& w) const {
        size_t h = 1469598103934665603ull;
        for (Sym s : w) {
            h ^= static_cast<size_t>(s) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedClass : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Cancelled : std::runtime_error {
    Cancelled() : std::runtime_error("operation cancelled") {}
};

} // namespace lingraph

#endif
