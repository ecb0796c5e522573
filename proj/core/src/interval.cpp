#include "ujel/interval.hpp"

namespace ujel {

std::string_view to_string(CiMethod method) {
    switch (method) {
        case CiMethod::Jel: return "jel";
        case CiMethod::NormalApprox: return "normal";
        case CiMethod::KernelBootstrap: return "kernel-boot";
    }
    return "unknown";
}

std::optional<CiMethod> parse_ci_method(std::string_view text) {
    if (text == "jel") return CiMethod::Jel;
    if (text == "normal") return CiMethod::NormalApprox;
    if (text == "kernel-boot") return CiMethod::KernelBootstrap;
    return std::nullopt;
}

}  // namespace ujel
