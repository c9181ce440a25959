#pragma once

#include "bench.hpp"
#include "decomposition.hpp"
#include "error.hpp"
#include "index.hpp"
#include "lcp.hpp"
#include "oracle.hpp"
#include "serialize.hpp"
#include "pattern.hpp"
#include "search.hpp"
#include "text.hpp"
#include "text_lce.hpp"
#include "trie.hpp"
#include "wildcard_tree.hpp"
