// plots.hpp - static SVG renderings of spectra and the Crooks fit.

#pragma once

#include <string>
#include <vector>

#include "qwork/fluctuation.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

/// Log-scale overlay of P_F(W) (solid) and P_B(-W) (dashed) with peak markers.
/// `bwd_peaks` are in the backward spectrum's own W convention.
std::string spectra_svg(const WorkSpectrum& fwd, const WorkSpectrum& bwd,
                        const std::vector<Peak>& fwd_peaks, const std::vector<Peak>& bwd_peaks,
                        double w_scale, const std::string& w_unit);

/// Log-scale ratio P_F(W)/P_B(-W) against W with exp(beta (W - dF)) and the fitted line.
std::string crooks_svg(const CrooksFit& fit, double beta, double delta_f, double w_scale,
                       const std::string& w_unit);

}  // namespace qwork
