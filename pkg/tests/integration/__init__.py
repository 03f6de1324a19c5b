# Integration tests package 