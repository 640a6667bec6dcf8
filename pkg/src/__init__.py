# socodes - Source Package
