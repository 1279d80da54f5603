#include "hyperbc/system.hpp"

#include <stdexcept>

namespace hyperbc {

void DynamicalSystem::validate() const {
    if (f.size() != state_vars.size())
        throw std::invalid_argument("dynamics must have one component per state variable");
    std::vector<std::string> all = state_vars;
    all.insert(all.end(), input_vars.begin(), input_vars.end());
    std::sort(all.begin(), all.end());
    for (const auto& comp : f)
        for (const auto& v : comp.variables())
            if (!std::binary_search(all.begin(), all.end(), v))
                throw std::invalid_argument("dynamics mention undeclared variable: " + v);
}

std::string copy_name(const std::string& base_var, int copy) {
    return base_var + "__" + std::to_string(copy);
}

std::vector<std::string> AugmentedSystem::copy_state_vars(int copy) const {
    std::vector<std::string> out;
    for (const auto& v : base.state_vars) out.push_back(copy_name(v, copy));
    return out;
}

std::vector<std::string> AugmentedSystem::copy_input_vars(int copy) const {
    std::vector<std::string> out;
    for (const auto& v : base.input_vars) out.push_back(copy_name(v, copy));
    return out;
}

AugmentedSystem self_compose(const DynamicalSystem& sys, int p) {
    if (p < 1) throw std::invalid_argument("self-composition needs p >= 1");
    sys.validate();

    AugmentedSystem aug;
    aug.p = p;
    aug.base = sys;

    std::vector<std::string> all_state, all_input;
    for (int i = 1; i <= p; ++i) {
        std::map<std::string, std::string> rename;
        for (const auto& v : sys.state_vars) {
            rename[v] = copy_name(v, i);
            all_state.push_back(rename[v]);
        }
        for (const auto& v : sys.input_vars) {
            rename[v] = copy_name(v, i);
            all_input.push_back(rename[v]);
        }
        for (const auto& comp : sys.f) aug.f.push_back(comp.renamed(rename));
    }
    aug.state_vars = all_state;
    aug.input_vars = all_input;

    aug.state_set = BasicSet::over(all_state);
    for (int i = 1; i <= p; ++i) {
        std::map<std::string, std::string> rename;
        for (const auto& v : sys.state_vars) rename[v] = copy_name(v, i);
        for (const auto& g : sys.state_set.gs) aug.state_set.add(g.renamed(rename));
    }
    aug.input_set = BasicSet::over(all_input);
    for (int i = 1; i <= p; ++i) {
        std::map<std::string, std::string> rename;
        for (const auto& v : sys.input_vars) rename[v] = copy_name(v, i);
        for (const auto& g : sys.input_set.gs) aug.input_set.add(g.renamed(rename));
    }
    return aug;
}

}  // namespace hyperbc
