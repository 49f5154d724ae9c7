"""Service tests package."""