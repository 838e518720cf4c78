#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entwit/bipartite.hpp"

namespace entwit {

// Named operator pair with optional product-form factors.
struct CatalogEntry {
    std::string name;
    std::string description;
    BipartiteOperator c_op;
    BipartiteOperator l_op;
    std::optional<ProductObservable> c_factors;
    std::optional<ProductObservable> l_factors;
};

// Looks up a built-in pair by name; throws ValidationError for unknown names.
CatalogEntry catalog(const std::string& name);

// Names accepted by catalog(), sorted.
std::vector<std::string> catalog_names();

}  // namespace entwit
