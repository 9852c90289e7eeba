# opalg tests
