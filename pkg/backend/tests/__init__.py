# Test package for the aperiodic toolkit
