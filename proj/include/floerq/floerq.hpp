#pragma once

#include "floerq/error.hpp"
#include "floerq/graded.hpp"
#include "floerq/smith.hpp"
#include "floerq/chain_complex.hpp"
#include "floerq/homology.hpp"
#include "floerq/report.hpp"
#include "floerq/floer.hpp"
#include "floerq/tensor_element.hpp"
#include "floerq/tables.hpp"
#include "floerq/products.hpp"
#include "floerq/morse_oracle.hpp"
#include "floerq/document.hpp"
#include "floerq/cli.hpp"
